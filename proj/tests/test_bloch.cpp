#include <doctest.h>

#include <cmath>
#include <random>

#include "gptkit/bloch.hpp"
#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"

using namespace gptkit;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

Eigen::Vector3d random_vector(std::mt19937_64& rng, double max_len) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> len(0.0, max_len);
  return Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized() * len(rng);
}

}  // namespace

TEST_CASE("density matrices and Bloch vectors") {
  const CMatrix up = bloch::bloch_to_density(Eigen::Vector3d(0, 0, 1));
  CHECK(std::abs(up(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(up(1, 1)) < 1e-15);
  const CMatrix plus = bloch::bloch_to_density(Eigen::Vector3d(1, 0, 0));
  CHECK(std::abs(plus(0, 1) - Complex(0.5, 0)) < 1e-15);
  CHECK(bloch::density_to_bloch(CMatrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  CHECK(code_of([] { bloch::bloch_to_density(Eigen::Vector3d(0.8, 0.8, 0)); }) == ErrorCode::NotAState);
  CHECK(code_of([] { bloch::density_to_bloch(CMatrix::Identity(2, 2)); }) == ErrorCode::NotAState);
  CHECK(code_of([] { bloch::density_to_bloch(CMatrix::Identity(3, 3) / 3.0); }) == ErrorCode::NotAState);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const Eigen::Vector3d r = random_vector(rng, 1.0);
    const CMatrix rho = bloch::bloch_to_density(r);
    CHECK((bloch::density_to_bloch(rho) - r).norm() < 1e-14);
    // eigenvalues of (1 + r.sigma)/2 are (1 +- |r|)/2
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
    CHECK(ev.minCoeff() == doctest::Approx((1 - r.norm()) / 2).epsilon(1e-12));
    CHECK(ev.maxCoeff() == doctest::Approx((1 + r.norm()) / 2).epsilon(1e-12));
  }
}

TEST_CASE("positivity is exactly the unit ball") {
  std::mt19937_64 rng(2);
  const auto& s = bloch::pauli();
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Vector3d r = random_vector(rng, 1.5);
    if (std::fabs(r.norm() - 1.0) < 1e-6) continue;
    const CMatrix m = 0.5 * (CMatrix::Identity(2, 2) + r.x() * s[0] + r.y() * s[1] + r.z() * s[2]);
    CHECK((hermitian_eigenvalues(m).minCoeff() >= 0) == (r.norm() <= 1.0));
  }
}

TEST_CASE("the equivalence map") {
  const Eigen::MatrixXd l = bloch::qubit_equivalence_map().matrix;
  Eigen::Matrix4d want;
  const double h = 1.0 / std::sqrt(2.0);
  want << 0.5, 0, 0, 0.5,
          0.5, 0, 0, -0.5,
          0, h, 0, 0,
          0, 0, -h, 0;
  CHECK((l - want).cwiseAbs().maxCoeff() < 1e-15);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Vector3d r = random_vector(rng, 1.0);
    Eigen::Vector4d x;
    x << 1.0, r;
    CHECK((l * x - hermitian_coordinates(bloch::bloch_to_density(r))).norm() < 1e-14);
  }
}

TEST_CASE("SU(2) to SO(3)") {
  const Eigen::Matrix3d rz = bloch::unitary_to_rotation(bloch::rotation_unitary(Eigen::Vector3d::UnitZ(), M_PI / 2));
  Eigen::Matrix3d want;
  want << 0, -1, 0,
          1, 0, 0,
          0, 0, 1;
  CHECK((rz - want).cwiseAbs().maxCoeff() < 1e-14);

  // exp(-i pi/4 sigma_z) written out
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::exp(Complex(0, -M_PI / 4));
  u(1, 1) = std::exp(Complex(0, M_PI / 4));
  CHECK((bloch::unitary_to_rotation(u) - want).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::Matrix3d rx = bloch::unitary_to_rotation(bloch::pauli()[0]);
  CHECK((rx - Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK(code_of([] { bloch::unitary_to_rotation(2.0 * CMatrix::Identity(2, 2)); }) == ErrorCode::NotUnitary);
  CHECK(code_of([] { bloch::unitary_to_rotation(CMatrix::Identity(3, 3)); }) == ErrorCode::NotUnitary);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const CMatrix a = random_unitary(2, rng);
    const CMatrix b = random_unitary(2, rng);
    const Eigen::Matrix3d ra = bloch::unitary_to_rotation(a);
    CHECK((bloch::unitary_to_rotation(a * b) - ra * bloch::unitary_to_rotation(b)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ra.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((ra.transpose() * ra - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    const CMatrix phased = std::exp(Complex(0, 0.37 * t)) * a;
    CHECK((bloch::unitary_to_rotation(phased) - ra).cwiseAbs().maxCoeff() < 1e-12);
    // U rho U^dagger <-> R r
    const Eigen::Vector3d r = random_vector(rng, 1.0);
    const CMatrix rho = bloch::bloch_to_density(r);
    CHECK((bloch::density_to_bloch(a * rho * a.adjoint()) - ra * r).norm() < 1e-12);
  }
}

TEST_CASE("Haar averages") {
  const auto samples = bloch::haar_rotations(20000, 0);
  REQUIRE(samples.size() == 20000);
  for (std::size_t i = 0; i < 50; ++i) CHECK(samples[i].determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bloch::haar_rotations(5, 9)[4] == bloch::haar_rotations(5, 9)[4]);

  const Eigen::Vector3d avg = bloch::group_average_state(samples, Eigen::Vector3d(0.3, -0.4, 0.8));
  CHECK(avg.norm() < 0.03);

  const Eigen::Matrix3d g = bloch::invariant_inner_product(samples, 11);
  CHECK(g.trace() == doctest::Approx(3.0));
  CHECK((g - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 0.05);

  CHECK(code_of([] { bloch::group_average_state({}, Eigen::Vector3d::UnitX()); }) == ErrorCode::TooFewSamples);
  const auto nine = bloch::haar_rotations(9, 1);
  CHECK(code_of([&] { bloch::invariant_inner_product(nine, 0); }) == ErrorCode::TooFewSamples);
  CHECK_NOTHROW(bloch::invariant_inner_product(bloch::haar_rotations(bloch::kMinInvariantSamples, 1), 0));

  const std::vector<Eigen::Matrix3d> identity{Eigen::Matrix3d::Identity()};
  CHECK((bloch::group_average_state(identity, Eigen::Vector3d(0, 0, 1)) - Eigen::Vector3d(0, 0, 1)).norm() == 0.0);
}

TEST_CASE("balls are strictly convex") {
  for (int d = 1; d <= 4; ++d) {
    const auto r = bloch::check_strict_convexity_ball(d, 200, 5);
    CHECK(r.dimension == d);
    CHECK(r.strict);
    CHECK(r.min_gap > 0.0);
    if (d == 1) {
      CHECK(r.pairs == 1);
      CHECK(r.min_gap == doctest::Approx(0.2));
    } else {
      CHECK(r.pairs == 200);
    }
  }
}

TEST_CASE("dimension and capacity scale multiplicatively") {
  const auto rep = bloch::check_dimension_law(3);
  CHECK(rep.ok);
  CHECK(rep.single.size() == 6);
  CHECK(rep.composite.size() == 12);
  for (const auto& row : rep.single) CHECK(row.ok);
  bool saw_q23 = false;
  for (const auto& row : rep.composite) {
    CHECK(row.ok);
    CHECK(row.k_ab == row.k_a * row.k_b);
    CHECK(row.n_ab == row.n_a * row.n_b);
    CHECK(row.lower_bound == row.n_a * row.n_b);
    if (row.label == "quantum(2)xquantum(3)") {
      saw_q23 = true;
      CHECK(row.k_ab == 36);
      CHECK(row.n_ab == 6);
    }
  }
  CHECK(saw_q23);
  CHECK(code_of([] { bloch::check_dimension_law(1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("fixed points") {
  const CMatrix centre = bloch::bloch_to_density(Eigen::Vector3d::Zero());
  CHECK((centre - CMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((bloch::unitary_to_rotation(CMatrix::Identity(2, 2)) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}
