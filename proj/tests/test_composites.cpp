#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gptkit/composites.hpp"
#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"
#include "oracles.hpp"

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

bool same_point_set(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    const bool hit = std::any_of(b.begin(), b.end(), [&](const Eigen::VectorXd& y) {
      return (x - y).cwiseAbs().maxCoeff() < 1e-8;
    });
    if (!hit) return false;
  }
  return true;
}

bool is_product_of_vertices(const StateSpace& a, const StateSpace& b, const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < a.num_vertices(); ++i) {
    for (Eigen::Index j = 0; j < b.num_vertices(); ++j) {
      if ((product_state(a.vertex(i), b.vertex(j)) - x).cwiseAbs().maxCoeff() < 1e-8) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("effect cone of the gbit is generated by the four edge effects") {
  const auto gens = effect_cone_generators(make_gbit()).generators;
  std::vector<Eigen::VectorXd> got, want;
  for (const auto& e : gens) got.push_back(e.coeffs);
  for (const auto& e : {gbit_effect_x(), gbit_effect_x_bar(), gbit_effect_y(), gbit_effect_y_bar()}) want.push_back(e.coeffs);
  CHECK(same_point_set(got, want));

  const auto cl = effect_cone_generators(make_classical(3)).generators;
  CHECK(cl.size() == 3);
  for (const auto& e : cl) CHECK(is_effect(make_classical(3), e));

  CHECK(code_of([] { effect_cone_generators(make_quantum(2)); }) == ErrorCode::UnsupportedKind);
  CHECK(code_of([] { effect_cone_generators(make_classical(11)); }) == ErrorCode::ScaleLimit);
}

TEST_CASE("minimal tensor product of two gbits") {
  const StateSpace g = make_gbit();
  const CompositeSpace m = min_tensor(g, g);
  CHECK(m.kind() == CompositeKind::Min);
  CHECK(m.ambient_dim() == 9);
  CHECK(m.unit() == product_state(g.unit(), g.unit()));
  REQUIRE(m.vertices().size() == 16);
  const StateSpace ms = m.as_state_space();
  for (const auto& v : m.vertices()) {
    CHECK(is_product_of_vertices(g, g, v));
    CHECK(is_pure(ms, v));
  }
  CHECK(code_of([&] { enumerate_vertices(m); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("maximal tensor product of two gbits has 24 vertices") {
  const StateSpace g = make_gbit();
  const CompositeSpace mx = max_tensor(g, g);
  CHECK(mx.kind() == CompositeKind::Max);
  CHECK(mx.inequalities().rows() == 16);
  const auto& verts = mx.vertices();
  REQUIRE(verts.size() == 24);
  CHECK(same_point_set(verts, oracle::polytope_vertices(mx.inequalities(), mx.unit())));

  const CompositeSpace mn = min_tensor(g, g);
  int products = 0;
  for (const auto& v : verts) {
    if (is_product_of_vertices(g, g, v)) {
      ++products;
      CHECK(mn.contains(v));
    } else {
      CHECK_FALSE(mn.contains(v));
      // entangled vertices have maximally mixed marginals
      CHECK((reduced_state(mx, v, Side::A) - g.unit()).norm() < 1e-9);
      CHECK((reduced_state(mx, v, Side::B) - g.unit()).norm() < 1e-9);
    }
  }
  CHECK(products == 16);
  for (const auto& v : mn.vertices()) CHECK(mx.contains(v));
}

TEST_CASE("with a classical factor the two products coincide") {
  const StateSpace pairs[][2] = {{make_classical(2), make_classical(3)},
                                 {make_classical(2), make_gbit()},
                                 {make_gbit(), make_classical(3)}};
  for (const auto& p : pairs) {
    const auto mn = min_tensor(p[0], p[1]).vertices();
    const auto mx = max_tensor(p[0], p[1]).vertices();
    CHECK(mn.size() == static_cast<std::size_t>(p[0].num_vertices() * p[1].num_vertices()));
    CHECK(same_point_set(mn, mx));
  }
}

TEST_CASE("reduced states") {
  const StateSpace g = make_gbit();
  const CompositeSpace mx = max_tensor(g, g);
  for (Eigen::Index i = 0; i < g.num_vertices(); ++i) {
    for (Eigen::Index j = 0; j < g.num_vertices(); ++j) {
      const Eigen::VectorXd w = product_state(g.vertex(i), g.vertex(j));
      CHECK((reduced_state(mx, w, Side::A) - g.vertex(i)).norm() < 1e-12);
      CHECK((reduced_state(mx, w, Side::B) - g.vertex(j)).norm() < 1e-12);
    }
  }
  Eigen::VectorXd outside = product_state(g.vertex(0), g.vertex(0));
  outside *= 2.0;
  CHECK(code_of([&] { reduced_state(mx, outside, Side::A); }) == ErrorCode::NotAState);

  // Phi+ reduces to the maximally mixed qubit on both sides
  CVector phi = CVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const Eigen::VectorXd x = product_coordinates(phi * phi.adjoint(), 2, 2);
  const StateSpace q = make_quantum(2);
  const Eigen::VectorXd half = hermitian_coordinates(0.5 * CMatrix::Identity(2, 2));
  CHECK((reduced_state(q, q, x, Side::A) - half).norm() < 1e-12);
  CHECK((reduced_state(q, q, x, Side::B) - half).norm() < 1e-12);

  // a product rho (x) sigma on 2 x 3
  std::mt19937_64 rng(4);
  const CMatrix rho = random_density_matrix(2, rng);
  const CMatrix sigma = random_density_matrix(3, rng);
  const Eigen::VectorXd y = product_coordinates(kron(rho, sigma), 2, 3);
  CHECK((reduced_state(make_quantum(2), make_quantum(3), y, Side::A) - hermitian_coordinates(rho)).norm() < 1e-12);
  CHECK((reduced_state(make_quantum(2), make_quantum(3), y, Side::B) - hermitian_coordinates(sigma)).norm() < 1e-12);
}

TEST_CASE("quantum maximal tensor product, sampled") {
  // the swap operator / 2 is block positive but not positive
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  const Eigen::VectorXd f = product_coordinates(0.5 * swap, 2, 2);
  CHECK(hermitian_eigenvalues(0.5 * swap).minCoeff() < -0.4);
  CHECK(quantum_max_tensor_contains_sampled(2, 2, f, kDefaultSampleCount, kDefaultSampleSeed));

  CMatrix bad = CMatrix::Zero(4, 4);
  bad(0, 0) = 1.5;
  bad(3, 3) = -0.5;
  CHECK_FALSE(quantum_max_tensor_contains_sampled(2, 2, product_coordinates(bad, 2, 2), kDefaultSampleCount,
                                                  kDefaultSampleSeed));
  CHECK_FALSE(quantum_max_tensor_contains_sampled(2, 2, 2.0 * f, kDefaultSampleCount, kDefaultSampleSeed));
}

TEST_CASE("products of maximal distinguishable sets stay distinguishable") {
  const StateSpace g = make_gbit();
  for (const auto& c : {min_tensor(g, g), max_tensor(g, g)}) {
    const auto r = check_supermultiplicativity(c);
    CHECK(r.verified);
    CHECK(r.capacity_a == 2);
    CHECK(r.capacity_b == 2);
    CHECK(r.lower_bound == 4);
    CHECK(r.product_states.size() == 4);
    CHECK(r.max_delta_error <= 1e-9);
  }
  const auto cc = check_supermultiplicativity(min_tensor(make_classical(2), make_classical(3)));
  CHECK(cc.verified);
  CHECK(cc.lower_bound == 6);

  const auto qq = check_supermultiplicativity(make_quantum(2), make_quantum(3));
  CHECK(qq.verified);
  CHECK(qq.lower_bound == 6);
  CHECK(code_of([] { check_supermultiplicativity(make_quantum(2), make_gbit()); }) == ErrorCode::UnsupportedKind);
}

TEST_CASE("tensor products reject unsupported factors and oversized problems") {
  CHECK(code_of([] { min_tensor(make_quantum(2), make_gbit()); }) == ErrorCode::UnsupportedKind);
  CHECK(code_of([] { max_tensor(make_gbit(), make_ball(2)); }) == ErrorCode::UnsupportedKind);
  const CompositeSpace big = max_tensor(make_classical(5), make_classical(4));
  CHECK(code_of([&] { enumerate_vertices(big); }) == ErrorCode::ScaleLimit);
}

TEST_CASE("small composites") {
  // a trivial factor changes nothing
  const StateSpace g = make_gbit();
  const auto with_trivial = min_tensor(make_classical(1), g).vertices();
  std::vector<Eigen::VectorXd> gv;
  for (Eigen::Index i = 0; i < g.num_vertices(); ++i) gv.push_back(g.vertex(i));
  CHECK(same_point_set(with_trivial, gv));
  CHECK(same_point_set(max_tensor(g, make_classical(1)).vertices(), gv));

  // classical(2) x classical(2) is classical(4)
  const StateSpace c4 = make_classical(4);
  std::vector<Eigen::VectorXd> c4v;
  for (Eigen::Index i = 0; i < 4; ++i) c4v.push_back(c4.vertex(i));
  CHECK(same_point_set(max_tensor(make_classical(2), make_classical(2)).vertices(), c4v));

  const auto c2 = effect_cone_generators(make_classical(2)).generators;
  std::vector<Eigen::VectorXd> got;
  for (const auto& e : c2) got.push_back(e.coeffs);
  CHECK(same_point_set(got, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}));

  CHECK(check_supermultiplicativity(make_quantum(2), make_quantum(2)).lower_bound == 4);
}
