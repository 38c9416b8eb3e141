#include "gptkit/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gptkit/composites.hpp"
#include "gptkit/distinguishability.hpp"
#include "gptkit/error.hpp"

namespace gptkit::bloch {

const std::array<CMatrix, 3>& pauli() {
  static const std::array<CMatrix, 3> s = [] {
    const Complex i(0.0, 1.0);
    std::array<CMatrix, 3> m;
    m[0] = (CMatrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
    m[1] = (CMatrix(2, 2) << 0.0, -i, i, 0.0).finished();
    m[2] = (CMatrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
    return m;
  }();
  return s;
}

CMatrix bloch_to_density(const BlochVector& r) {
  if (!r.allFinite() || r.norm() > 1.0 + kBlochTolerance) {
    fail(ErrorCode::NotAState, "Bloch vector lies outside the unit ball");
  }
  const auto& s = pauli();
  return 0.5 * (CMatrix::Identity(2, 2) + r(0) * s[0] + r(1) * s[1] + r(2) * s[2]);
}

BlochVector density_to_bloch(const CMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) fail(ErrorCode::NotAState, "qubit density matrices are 2x2");
  if (!is_hermitian(rho, kBlochTolerance) || std::fabs(rho.trace().real() - 1.0) > kBlochTolerance ||
      hermitian_eigenvalues(rho)(0) < -kBlochTolerance) {
    fail(ErrorCode::NotAState, "matrix is not a density matrix");
  }
  const auto& s = pauli();
  BlochVector r;
  for (int k = 0; k < 3; ++k) r(k) = (rho * s[static_cast<std::size_t>(k)]).trace().real();
  return r;
}

LinearMap qubit_equivalence_map() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4d m;
  m << 0.5, 0.0, 0.0, 0.5,
       0.5, 0.0, 0.0, -0.5,
       0.0, h, 0.0, 0.0,
       0.0, 0.0, -h, 0.0;
  return LinearMap{m};
}

Eigen::Matrix3d unitary_to_rotation(const CMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !u.allFinite()) fail(ErrorCode::NotUnitary, "expected a 2x2 matrix");
  if ((u.adjoint() * u - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kBlochTolerance) {
    fail(ErrorCode::NotUnitary, "matrix is not unitary");
  }
  const auto& s = pauli();
  Eigen::Matrix3d r;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          0.5 * (s[i] * u * s[j] * u.adjoint()).trace().real();
    }
  }
  return r;
}

CMatrix rotation_unitary(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) fail(ErrorCode::InvalidArgument, "rotation axis must be nonzero");
  const Eigen::Vector3d a = axis / n;
  const auto& s = pauli();
  const CMatrix ns = a(0) * s[0] + a(1) * s[1] + a(2) * s[2];
  return std::cos(angle / 2) * CMatrix::Identity(2, 2) - Complex(0.0, std::sin(angle / 2)) * ns;
}

std::vector<Eigen::Matrix3d> haar_rotations(int count, std::uint64_t seed) {
  if (count < 0) fail(ErrorCode::InvalidArgument, "sample count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::Matrix3d> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    if (q.norm() < 1e-12) continue;
    q.normalize();
    out.push_back(q.toRotationMatrix());
  }
  return out;
}

BlochVector group_average_state(const std::vector<Eigen::Matrix3d>& samples, const BlochVector& omega) {
  if (samples.empty()) fail(ErrorCode::TooFewSamples, "group average needs at least one sample");
  BlochVector sum = BlochVector::Zero();
  for (const auto& t : samples) sum += t * omega;
  return sum / static_cast<double>(samples.size());
}

Eigen::Matrix3d invariant_inner_product(const std::vector<Eigen::Matrix3d>& samples, std::uint64_t seed) {
  if (static_cast<int>(samples.size()) < kMinInvariantSamples) {
    fail(ErrorCode::TooFewSamples, "invariant inner product needs at least 10 samples");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = gauss(rng);
  }
  const Eigen::Matrix3d g0 = m.transpose() * m + 0.1 * Eigen::Matrix3d::Identity();
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  for (const auto& t : samples) g += t.transpose() * g0 * t;
  g /= static_cast<double>(samples.size());
  return (3.0 / g.trace()) * g;
}

StrictConvexityReport check_strict_convexity_ball(int d, int trials, std::uint64_t seed) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "ball dimension must be at least 1");
  StrictConvexityReport report;
  report.dimension = d;
  auto check_pair = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    ++report.pairs;
    for (int k = 1; k <= 9; ++k) {
      const double lambda = 0.1 * k;
      const double gap = 1.0 - (lambda * x + (1.0 - lambda) * y).norm();
      report.min_gap = std::min(report.min_gap, gap);
    }
  };
  if (d == 1) {
    check_pair(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0));
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto unit = [&] {
      Eigen::VectorXd v(d);
      for (int i = 0; i < d; ++i) v(i) = gauss(rng);
      return Eigen::VectorXd(v.normalized());
    };
    for (int t = 0; t < trials; ++t) {
      const Eigen::VectorXd x = unit();
      Eigen::VectorXd y = unit();
      while ((x - y).norm() < 1e-6) y = unit();
      check_pair(x, y);
    }
  }
  report.strict = report.min_gap > 0.0;
  return report;
}

DimensionLawReport check_dimension_law(int n_max) {
  if (n_max < 2) fail(ErrorCode::InvalidArgument, "dimension law check needs n_max >= 2");
  DimensionLawReport report;
  auto single = [&](const std::string& label, const StateSpace& s, int n, long expected_k) {
    DimensionLawRow row;
    row.label = label;
    row.k_a = s.ambient_dim();
    row.k_b = 1;
    row.k_ab = row.k_a;
    row.n_a = capacity(s, {}, n + 1);
    row.n_b = 1;
    row.n_ab = row.n_a;
    row.ok = row.k_a == expected_k && row.n_a == n;
    report.ok = report.ok && row.ok;
    report.single.push_back(row);
  };
  for (int n = 1; n <= n_max; ++n) {
    single("classical(" + std::to_string(n) + ")", make_classical(n), n, n);
    single("quantum(" + std::to_string(n) + ")", make_quantum(n), n, static_cast<long>(n) * n);
  }

  for (int a = 1; a <= n_max; ++a) {
    for (int b = a; b <= n_max; ++b) {
      const std::string dims = "(" + std::to_string(a) + ")x";
      if (a * b <= kMaxClassicalCompositeOutcomes) {
        const StateSpace ca = make_classical(a);
        const StateSpace cb = make_classical(b);
        const CompositeSpace c = min_tensor(ca, cb);
        const StateSpace joint = c.as_state_space();
        const SupermultiplicativityReport sm = check_supermultiplicativity(c);
        DimensionLawRow row;
        row.label = "classical" + dims + "classical(" + std::to_string(b) + ")";
        row.k_a = ca.ambient_dim();
        row.k_b = cb.ambient_dim();
        row.k_ab = c.ambient_dim();
        row.n_a = capacity(ca, {}, a);
        row.n_b = capacity(cb, {}, b);
        row.n_ab = capacity(joint, {}, a * b);
        row.lower_bound = sm.verified ? sm.lower_bound : 0;
        row.ok = row.k_ab == row.k_a * row.k_b && row.n_ab == row.n_a * row.n_b &&
                 row.lower_bound == row.n_a * row.n_b;
        report.ok = report.ok && row.ok;
        report.composite.push_back(row);
      }
      const StateSpace qa = make_quantum(a);
      const StateSpace qb = make_quantum(b);
      const StateSpace joint = make_quantum(a * b);
      const SupermultiplicativityReport sm = check_supermultiplicativity(qa, qb);
      DimensionLawRow row;
      row.label = "quantum" + dims + "quantum(" + std::to_string(b) + ")";
      row.k_a = qa.ambient_dim();
      row.k_b = qb.ambient_dim();
      row.k_ab = joint.ambient_dim();
      row.n_a = capacity(qa, {}, a);
      row.n_b = capacity(qb, {}, b);
      row.n_ab = capacity(joint, {}, a * b);
      row.lower_bound = sm.verified ? sm.lower_bound : 0;
      row.ok = row.k_ab == row.k_a * row.k_b && row.n_ab == row.n_a * row.n_b &&
               row.lower_bound == row.n_a * row.n_b;
      report.ok = report.ok && row.ok;
      report.composite.push_back(row);
    }
  }
  return report;
}

}  // namespace gptkit::bloch
