#include <doctest.h>

#include "gptkit/distinguishability.hpp"
#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"
#include "oracles.hpp"

using namespace gptkit;

namespace {

std::vector<Eigen::VectorXd> vertices(const StateSpace& s, std::initializer_list<int> idx) {
  std::vector<Eigen::VectorXd> out;
  for (int i : idx) out.push_back(s.vertex(i));
  return out;
}

bool close(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff() < 1e-7; }

}  // namespace

TEST_CASE("gbit: the y measurement separates omega1 and omega2") {
  const StateSpace g = make_gbit();
  const auto w = perfectly_distinguishable(g, vertices(g, {0, 1}));
  REQUIRE(w);
  REQUIRE(w->measurement.size() == 2);
  CHECK(witness_error(*w) <= kWitnessTolerance);
  CHECK(close(w->measurement[0].coeffs, gbit_effect_y_bar().coeffs));
  CHECK(close(w->measurement[1].coeffs, gbit_effect_y().coeffs));
}

TEST_CASE("gbit: no three vertices are jointly distinguishable") {
  const StateSpace g = make_gbit();
  CHECK_FALSE(perfectly_distinguishable(g, vertices(g, {0, 1, 2})));
  CHECK_FALSE(perfectly_distinguishable(g, vertices(g, {0, 1, 3})));
  CHECK_FALSE(perfectly_distinguishable(g, vertices(g, {0, 2, 3})));
  CHECK_FALSE(perfectly_distinguishable(g, vertices(g, {1, 2, 3})));
  CHECK(capacity(g, {}, 4) == 2);
}

TEST_CASE("gbit: pairwise but not jointly distinguishable triples exist") {
  const StateSpace g = make_gbit();
  int gap_triples = 0;
  oracle::for_each_subset(4, 3, [&](const std::vector<int>& t) {
    bool pairwise = true;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        pairwise = pairwise && perfectly_distinguishable(g, vertices(g, {t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]})).has_value();
      }
    }
    const bool joint = perfectly_distinguishable(g, vertices(g, {t[0], t[1], t[2]})).has_value();
    if (pairwise && !joint) ++gap_triples;
    return false;
  });
  CHECK(gap_triples == 4);
}

TEST_CASE("subsets of distinguishable sets are distinguishable") {
  for (const StateSpace& s : {make_gbit(), make_classical(4)}) {
    const int m = static_cast<int>(s.num_vertices());
    for (int k = 2; k <= m; ++k) {
      oracle::for_each_subset(m, k, [&](const std::vector<int>& idx) {
        std::vector<Eigen::VectorXd> set;
        for (int i : idx) set.push_back(s.vertex(i));
        if (!perfectly_distinguishable(s, set)) return false;
        for (std::size_t drop = 0; drop < set.size(); ++drop) {
          auto sub = set;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          CHECK(perfectly_distinguishable(s, sub).has_value());
        }
        return false;
      });
    }
  }
}

TEST_CASE("classical: deterministic states are separated by coordinate effects") {
  const StateSpace c = make_classical(3);
  const auto w = perfectly_distinguishable(c, vertices(c, {0, 1, 2}));
  REQUIRE(w);
  for (int i = 0; i < 3; ++i) CHECK(close(w->measurement[static_cast<std::size_t>(i)].coeffs, Eigen::VectorXd::Unit(3, i)));
  for (int n = 1; n <= 5; ++n) CHECK(capacity(make_classical(n), {}, n) == n);
  CHECK(capacity(make_classical(3), {}, 5) == 3);
  CHECK(capacity(make_classical(5), {}, 2) == 2);
}

TEST_CASE("quantum: orthogonal supports") {
  const StateSpace q = make_quantum(3);
  CMatrix p0 = CMatrix::Zero(3, 3), p12 = CMatrix::Zero(3, 3), mixed = CMatrix::Zero(3, 3);
  p0(0, 0) = 1;
  p12(1, 1) = p12(2, 2) = 0.5;
  mixed(0, 0) = mixed(1, 1) = 0.5;
  const auto w = perfectly_distinguishable(q, {hermitian_coordinates(p0), hermitian_coordinates(p12)});
  REQUIRE(w);
  CHECK(witness_error(*w) <= kWitnessTolerance);
  CHECK_FALSE(perfectly_distinguishable(q, {hermitian_coordinates(p0), hermitian_coordinates(mixed)}));
  CHECK(capacity(make_quantum(2), {}, 5) == 2);
  CHECK(capacity(make_quantum(4), {}, 3) == 3);
  CHECK(maximal_distinguishable_set(q, {}, 5).states.size() == 3);
}

TEST_CASE("ball: antipodal pure states only") {
  const StateSpace b = make_ball(3);
  Eigen::VectorXd n(4), s(4), e(4);
  n << 1, 0, 0.6, 0.8;
  s << 1, 0, -0.6, -0.8;
  e << 1, 1, 0, 0;
  const auto w = perfectly_distinguishable(b, {n, s});
  REQUIRE(w);
  CHECK(witness_error(*w) <= kWitnessTolerance);
  CHECK_FALSE(perfectly_distinguishable(b, {n, e}));
  CHECK_FALSE(perfectly_distinguishable(b, {n, s, e}));
  CHECK(capacity(b, {}, 5) == 2);
}

TEST_CASE("input validation") {
  const StateSpace g = make_gbit();
  Eigen::VectorXd bad(3);
  bad << 2, 0, 1;
  CHECK_THROWS_AS(perfectly_distinguishable(g, {bad}), Error);
  try {
    perfectly_distinguishable(g, {bad});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAState);
  }
  try {
    capacity(g, {}, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("subset enumeration cap") {
  // 40 candidates, subsets of size 20: C(40, 20) > 10^6
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(40, 40);
  const StateSpace c = StateSpace::polytopic_trusted(v, Eigen::VectorXd::Ones(40));
  std::vector<Eigen::VectorXd> cand;
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(40, 0.5 / 39);
    x(i) = 0.5;
    cand.push_back(x);  // mixed, pairwise overlapping: none distinguishable
  }
  try {
    capacity(c, cand, 20);
    FAIL("expected ScaleLimit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleLimit);
  }
}

TEST_CASE("capacity is attained on extreme points for the test spaces") {
  // adding mixed candidates (edge midpoints and random interior points) never
  // raises the capacity found on the vertices alone
  std::mt19937_64 rng(13);
  std::vector<StateSpace> spaces{make_classical(2), make_classical(3), make_classical(4), make_gbit()};
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int n = 3; n <= 6; ++n) {
    Eigen::MatrixXd v(3, n);
    for (int i = 0; i < n; ++i) {
      const double a = ang(rng);
      v.col(i) << std::cos(a), std::sin(a), 1.0;
    }
    spaces.push_back(StateSpace::polytopic(v, Eigen::Vector3d(0, 0, 1)));
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const StateSpace& s : spaces) {
    const int m = static_cast<int>(s.num_vertices());
    std::vector<Eigen::VectorXd> cand;
    for (int i = 0; i < m; ++i) cand.push_back(s.vertex(i));
    // polygons beyond triangles have capacity 2, so sizes above 4 add nothing
    const int n_max = std::min(m, 4);
    const int on_vertices = capacity(s, cand, n_max);
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) cand.push_back(0.5 * (s.vertex(i) + s.vertex(j)));
    }
    for (int t = 0; t < 3; ++t) {
      const double l = unif(rng);
      cand.push_back(l * s.vertex(0) + (1 - l) * s.vertex(m - 1));
    }
    CHECK(capacity(s, cand, n_max) == on_vertices);
    // brute force over every subset of the vertices agrees with the search
    int brute = 1;
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<Eigen::VectorXd> sub;
      for (int i = 0; i < m; ++i) {
        if (mask >> i & 1) sub.push_back(s.vertex(i));
      }
      if (static_cast<int>(sub.size()) > brute && perfectly_distinguishable(s, sub)) brute = static_cast<int>(sub.size());
    }
    CHECK(on_vertices == brute);
  }
}
