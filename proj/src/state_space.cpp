#include "gptkit/state_space.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"
#include "gptkit/lp.hpp"

namespace gptkit {

using lp::kTolerance;

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Polytopic:
      return "polytopic";
    case SpaceKind::Quantum:
      return "quantum";
    case SpaceKind::Ball:
      return "ball";
  }
  return "unknown";
}

namespace {

void require_dim(const StateSpace& space, Eigen::Index size, const char* what) {
  if (size != space.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + " has length " + std::to_string(size) +
                                           ", expected " + std::to_string(space.ambient_dim()));
  }
}

// Is x a convex combination of the given columns?
bool in_convex_hull(const Eigen::MatrixXd& points, const Eigen::VectorXd& x) {
  const Eigen::Index n = points.cols();
  if (n == 0) return false;
  lp::LpProblem p(n);
  for (Eigen::Index r = 0; r < points.rows(); ++r) p.add_equality(points.row(r), x(r));
  p.add_equality(Eigen::RowVectorXd::Ones(n), 1.0);
  return lp::solve(p).optimal();
}

Eigen::MatrixXd drop_column(const Eigen::MatrixXd& m, Eigen::Index col) {
  Eigen::MatrixXd out(m.rows(), m.cols() - 1);
  for (Eigen::Index j = 0, k = 0; j < m.cols(); ++j) {
    if (j != col) out.col(k++) = m.col(j);
  }
  return out;
}

Eigen::Index matching_vertex(const StateSpace& space, const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < space.num_vertices(); ++i) {
    if ((space.vertices().col(i) - x).cwiseAbs().maxCoeff() <= kTolerance) return i;
  }
  return -1;
}

bool ball_spatial_valid(const Eigen::VectorXd& x) {
  return std::fabs(x(0) - 1.0) <= kTolerance && x.tail(x.size() - 1).norm() <= 1.0 + kTolerance;
}

}  // namespace

StateSpace StateSpace::polytopic_trusted(Eigen::MatrixXd vertices, Eigen::VectorXd unit) {
  if (vertices.cols() == 0) fail(ErrorCode::InvalidArgument, "polytopic space needs a vertex");
  if (vertices.rows() != unit.size()) {
    fail(ErrorCode::DimensionMismatch, "vertex length differs from unit functional length");
  }
  for (Eigen::Index i = 0; i < vertices.cols(); ++i) {
    if (std::fabs(unit.dot(vertices.col(i)) - 1.0) > kTolerance) {
      fail(ErrorCode::InvalidArgument, "vertex " + std::to_string(i) + " is not normalized");
    }
  }
  StateSpace s;
  s.kind_ = SpaceKind::Polytopic;
  s.vertices_ = std::move(vertices);
  s.unit_ = std::move(unit);
  return s;
}

StateSpace StateSpace::polytopic(Eigen::MatrixXd vertices, Eigen::VectorXd unit) {
  StateSpace s = polytopic_trusted(std::move(vertices), std::move(unit));
  for (Eigen::Index i = 0; i < s.num_vertices(); ++i) {
    if (s.num_vertices() > 1 && in_convex_hull(drop_column(s.vertices_, i), s.vertices_.col(i))) {
      fail(ErrorCode::InvalidArgument, "vertex " + std::to_string(i) + " is not extremal");
    }
  }
  return s;
}

StateSpace StateSpace::quantum(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "quantum space needs N >= 1");
  StateSpace s;
  s.kind_ = SpaceKind::Quantum;
  s.n_ = n;
  s.unit_ = hermitian_coordinates(CMatrix::Identity(n, n));
  return s;
}

StateSpace StateSpace::ball(int d) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "ball space needs d >= 1");
  StateSpace s;
  s.kind_ = SpaceKind::Ball;
  s.d_ = d;
  s.unit_ = Eigen::VectorXd::Unit(d + 1, 0);
  return s;
}

Measurement Measurement::create(const StateSpace& space, std::vector<Effect> effects) {
  if (effects.empty()) fail(ErrorCode::InvalidArgument, "measurement needs at least one effect");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(space.ambient_dim());
  for (const Effect& e : effects) {
    require_dim(space, e.coeffs.size(), "effect");
    if (!is_effect(space, e)) fail(ErrorCode::InvalidArgument, "measurement contains an invalid effect");
    total += e.coeffs;
  }
  if ((total - space.unit()).cwiseAbs().maxCoeff() > kTolerance) {
    fail(ErrorCode::InvalidArgument, "effects do not sum to the unit functional");
  }
  return Measurement(std::move(effects));
}

bool LinearMap::invertible() const {
  if (matrix.rows() != matrix.cols() || matrix.size() == 0) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) >= 1e-10 * sv(0) && sv(0) > 0.0;
}

StateSpace make_classical(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "classical space needs N >= 1");
  return StateSpace::polytopic_trusted(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Ones(n));
}

StateSpace make_quantum(int n) { return StateSpace::quantum(n); }

StateSpace make_gbit() {
  Eigen::MatrixXd v(3, 4);
  v << -1, -1, 1, 1,
       -1, 1, 1, -1,
        1, 1, 1, 1;
  return StateSpace::polytopic_trusted(std::move(v), Eigen::Vector3d(0, 0, 1));
}

StateSpace make_ball(int d) { return StateSpace::ball(d); }

Effect gbit_effect_x() { return {Eigen::Vector3d(0.5, 0.0, 0.5)}; }
Effect gbit_effect_x_bar() { return {Eigen::Vector3d(-0.5, 0.0, 0.5)}; }
Effect gbit_effect_y() { return {Eigen::Vector3d(0.0, 0.5, 0.5)}; }
Effect gbit_effect_y_bar() { return {Eigen::Vector3d(0.0, -0.5, 0.5)}; }

bool contains_state(const StateSpace& space, const Eigen::VectorXd& x) {
  require_dim(space, x.size(), "state");
  switch (space.kind()) {
    case SpaceKind::Polytopic:
      return in_convex_hull(space.vertices(), x);
    case SpaceKind::Quantum: {
      const CMatrix rho = hermitian_from_coordinates(x, space.hilbert_dim());
      if (std::fabs(rho.trace().real() - 1.0) > kTolerance) return false;
      return hermitian_eigenvalues(rho)(0) >= -kTolerance;
    }
    case SpaceKind::Ball:
      return ball_spatial_valid(x);
  }
  return false;
}

bool is_effect(const StateSpace& space, const Effect& e) {
  require_dim(space, e.coeffs.size(), "effect");
  switch (space.kind()) {
    case SpaceKind::Polytopic: {
      const Eigen::RowVectorXd values = e.coeffs.transpose() * space.vertices();
      return values.minCoeff() >= -kTolerance && values.maxCoeff() <= 1.0 + kTolerance;
    }
    case SpaceKind::Quantum: {
      const Eigen::VectorXd ev =
          hermitian_eigenvalues(hermitian_from_coordinates(e.coeffs, space.hilbert_dim()));
      return ev(0) >= -kTolerance && ev(ev.size() - 1) <= 1.0 + kTolerance;
    }
    case SpaceKind::Ball: {
      // e(1, r) = c + s.r ranges over [c - |s|, c + |s|].
      const double c = e.coeffs(0);
      const double s = e.coeffs.tail(e.coeffs.size() - 1).norm();
      return c - s >= -kTolerance && c + s <= 1.0 + kTolerance;
    }
  }
  return false;
}

bool is_pure(const StateSpace& space, const Eigen::VectorXd& omega) {
  if (!contains_state(space, omega)) fail(ErrorCode::NotAState, "is_pure: input is not a state");
  switch (space.kind()) {
    case SpaceKind::Polytopic: {
      const Eigen::Index idx = matching_vertex(space, omega);
      if (idx < 0) return false;
      if (space.num_vertices() == 1) return true;
      return !in_convex_hull(drop_column(space.vertices(), idx), omega);
    }
    case SpaceKind::Quantum: {
      const Eigen::VectorXd ev =
          hermitian_eigenvalues(hermitian_from_coordinates(omega, space.hilbert_dim()));
      return ev(ev.size() - 1) >= 1.0 - kTolerance;
    }
    case SpaceKind::Ball:
      return omega.tail(omega.size() - 1).norm() >= 1.0 - kTolerance;
  }
  return false;
}

std::vector<Eigen::VectorXd> sample_pure_states(const StateSpace& space, int count,
                                                std::uint64_t seed) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    switch (space.kind()) {
      case SpaceKind::Polytopic:
        out.push_back(space.vertex(k % space.num_vertices()));
        break;
      case SpaceKind::Quantum: {
        const CVector psi = random_unit_vector(space.hilbert_dim(), rng);
        out.push_back(hermitian_coordinates(psi * psi.adjoint()));
        break;
      }
      case SpaceKind::Ball: {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd r(space.ball_dim());
        for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = gauss(rng);
        Eigen::VectorXd x(space.ambient_dim());
        x(0) = 1.0;
        x.tail(r.size()) = r / r.norm();
        out.push_back(std::move(x));
        break;
      }
    }
  }
  return out;
}

namespace {

// Images of Omega's extreme points (all vertices, or seeded samples) all lie in target.
bool maps_into(const StateSpace& source, const Eigen::MatrixXd& m, const StateSpace& target,
               std::uint64_t seed) {
  if (source.kind() == SpaceKind::Polytopic) {
    for (Eigen::Index i = 0; i < source.num_vertices(); ++i) {
      if (!contains_state(target, m * source.vertices().col(i))) return false;
    }
    return true;
  }
  for (const Eigen::VectorXd& x : sample_pure_states(source, kDefaultSampleCount, seed)) {
    if (!contains_state(target, m * x)) return false;
  }
  return true;
}

void require_square(const StateSpace& space, const LinearMap& t) {
  if (t.matrix.rows() != space.ambient_dim() || t.matrix.cols() != space.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, "transformation must be square of side ambient_dim");
  }
}

bool preserves_normalization(const StateSpace& space, const LinearMap& t) {
  const Eigen::RowVectorXd pulled = space.unit().transpose() * t.matrix;
  return (pulled - space.unit().transpose()).cwiseAbs().maxCoeff() <= kTolerance;
}

}  // namespace

bool is_transformation(const StateSpace& space, const LinearMap& t, std::uint64_t seed) {
  require_square(space, t);
  if (space.kind() != SpaceKind::Polytopic && !preserves_normalization(space, t)) return false;
  if (space.kind() == SpaceKind::Ball) {
    // With no translation part the condition is exactly ||M||_2 <= 1.
    const Eigen::Index d = space.ball_dim();
    const Eigen::VectorXd shift = t.matrix.block(1, 0, d, 1);
    const Eigen::MatrixXd m = t.matrix.bottomRightCorner(d, d);
    if (shift.norm() <= kTolerance) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      return svd.singularValues()(0) <= 1.0 + kTolerance;
    }
  }
  return maps_into(space, t.matrix, space, seed);
}

bool is_reversible_transformation(const StateSpace& space, const LinearMap& t,
                                  std::uint64_t seed) {
  require_square(space, t);
  if (!t.invertible()) return false;
  if (!is_transformation(space, t, seed)) return false;
  switch (space.kind()) {
    case SpaceKind::Polytopic: {
      // T permutes the vertex set.
      const Eigen::Index n = space.num_vertices();
      std::vector<bool> hit(static_cast<std::size_t>(n), false);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = matching_vertex(space, t.matrix * space.vertices().col(i));
        if (j < 0 || hit[static_cast<std::size_t>(j)]) return false;
        hit[static_cast<std::size_t>(j)] = true;
      }
      return true;
    }
    case SpaceKind::Ball: {
      const Eigen::Index d = space.ball_dim();
      const Eigen::MatrixXd m = t.matrix.bottomRightCorner(d, d);
      if (t.matrix.block(1, 0, d, 1).norm() > kTolerance) return false;
      return (m.transpose() * m - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <=
             kTolerance;
    }
    case SpaceKind::Quantum:
      return is_transformation(space, LinearMap{t.matrix.inverse()}, seed);
  }
  return false;
}

bool are_equivalent(const StateSpace& a, const StateSpace& b, const LinearMap& l,
                    std::uint64_t seed) {
  if (l.matrix.cols() != a.ambient_dim() || l.matrix.rows() != b.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, "map does not take A's ambient space to B's");
  }
  if (a.ambient_dim() != b.ambient_dim()) return false;
  if (!l.invertible()) fail(ErrorCode::SingularMap, "equivalence map is singular");
  if (a.kind() == SpaceKind::Polytopic && b.kind() == SpaceKind::Polytopic &&
      a.num_vertices() != b.num_vertices()) {
    return false;
  }
  return maps_into(a, l.matrix, b, seed) && maps_into(b, l.matrix.inverse(), a, seed);
}

}  // namespace gptkit
