#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gptkit/bell.hpp"
#include "gptkit/composites.hpp"
#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"

using namespace gptkit;
using bell::ProbTable222;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// Independent local-polytope test: positivity, no-signalling and the eight
// CHSH facets, all evaluated straight from the flat index layout.
struct LocalOracle {
  static double p(const ProbTable222& t, int x, int y, int ab, int bb) { return t.p[8 * x + 4 * y + 2 * ab + bb]; }

  static bool nonsignalling(const ProbTable222& t, double tol = 1e-9) {
    for (int x = 0; x < 2; ++x) {
      for (int ab = 0; ab < 2; ++ab) {
        const double m0 = p(t, x, 0, ab, 0) + p(t, x, 0, ab, 1);
        const double m1 = p(t, x, 1, ab, 0) + p(t, x, 1, ab, 1);
        if (std::fabs(m0 - m1) > tol) return false;
      }
    }
    for (int y = 0; y < 2; ++y) {
      for (int bb = 0; bb < 2; ++bb) {
        const double m0 = p(t, 0, y, 0, bb) + p(t, 0, y, 1, bb);
        const double m1 = p(t, 1, y, 0, bb) + p(t, 1, y, 1, bb);
        if (std::fabs(m0 - m1) > tol) return false;
      }
    }
    return true;
  }

  static double correlator(const ProbTable222& t, int x, int y) {
    return p(t, x, y, 0, 0) + p(t, x, y, 1, 1) - p(t, x, y, 0, 1) - p(t, x, y, 1, 0);
  }

  static double max_chsh(const ProbTable222& t) {
    double best = -1e300;
    for (int s = 0; s < 8; ++s) {
      double v = 0.0;
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          const int parity = (x * y + (s >> 2) * x + ((s >> 1) & 1) * y + (s & 1)) & 1;
          v += (parity ? -1.0 : 1.0) * correlator(t, x, y);
        }
      }
      best = std::max(best, v);
    }
    return best;
  }

  static bool local(const ProbTable222& t, double tol = 1e-9) {
    for (double v : t.p) {
      if (v < -tol) return false;
    }
    return nonsignalling(t, tol) && max_chsh(t) <= 2.0 + tol;
  }
};

ProbTable222 mix(const std::vector<std::pair<double, ProbTable222>>& parts) {
  ProbTable222 out;
  for (const auto& [w, t] : parts) {
    for (int i = 0; i < 16; ++i) out.p[static_cast<std::size_t>(i)] += w * t.p[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<double> dirichlet(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& v : w) s += (v = e(rng));
  for (auto& v : w) v /= s;
  return w;
}

CMatrix random_observable(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d r(g(rng), g(rng), g(rng));
  r.normalize();
  CMatrix a(2, 2);
  a << Complex(r.z(), 0), Complex(r.x(), -r.y()), Complex(r.x(), r.y()), Complex(-r.z(), 0);
  return a;
}

CMatrix sigma_z() {
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

}  // namespace

TEST_CASE("table layout") {
  CHECK(bell::table_index(0, 0, -1, -1) == 0);
  CHECK(bell::table_index(0, 0, -1, 1) == 1);
  CHECK(bell::table_index(0, 0, 1, -1) == 2);
  CHECK(bell::table_index(1, 1, 1, 1) == 15);
  CHECK(bell::table_index(1, 0, -1, -1) == 8);
}

TEST_CASE("deterministic tables") {
  const auto& det = bell::deterministic_tables();
  REQUIRE(det.size() == 16);
  std::set<std::array<double, 16>> distinct;
  for (int k = 0; k < 16; ++k) {
    const auto& t = det[static_cast<std::size_t>(k)];
    distinct.insert(t.p);
    CHECK(bell::classify(t) == bell::TableClass::Deterministic);
    CHECK(bell::is_nonsignalling(t));
    CHECK(std::fabs(bell::chsh(t)) <= 2.0 + 1e-12);
    const int f0 = (k >> 3) & 1, f1 = (k >> 2) & 1, g0 = (k >> 1) & 1, g1 = k & 1;
    const int f[2] = {f0, f1}, g[2] = {g0, g1};
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) CHECK(t.p[static_cast<std::size_t>(8 * x + 4 * y + 2 * f[x] + g[y])] == 1.0);
    }
    const auto model = bell::classical_membership(t);
    REQUIRE(model);
  }
  CHECK(distinct.size() == 16);
}

TEST_CASE("mixtures of deterministic tables obey CHSH <= 2") {
  std::mt19937_64 rng(1);
  const auto& det = bell::deterministic_tables();
  double worst = -10.0;
  for (int t = 0; t < 10000; ++t) {
    const auto w = dirichlet(rng, 16);
    std::vector<std::pair<double, ProbTable222>> parts;
    for (int k = 0; k < 16; ++k) parts.emplace_back(w[static_cast<std::size_t>(k)], det[static_cast<std::size_t>(k)]);
    const ProbTable222 m = mix(parts);
    worst = std::max(worst, bell::chsh(m));
    CHECK(bell::chsh(m) <= 2.0 + 1e-12);
  }
  CHECK(worst > 0.5);
}

TEST_CASE("PR boxes") {
  const ProbTable222 pr = bell::pr_box(0, 0, 0);
  CHECK(bell::chsh(pr) == doctest::Approx(4.0));
  CHECK(bell::is_nonsignalling(pr));
  CHECK_FALSE(bell::classical_membership(pr));
  CHECK(bell::pr_variant(pr) == 0);
  // P(a,b|x,y) = 1/2 exactly when ab = (-1)^{xy}
  CHECK(pr(1, 1, 0, 0) == 0.5);
  CHECK(pr(-1, -1, 0, 0) == 0.5);
  CHECK(pr(1, -1, 0, 0) == 0.0);
  CHECK(pr(1, -1, 1, 1) == 0.5);
  CHECK(pr(1, 1, 1, 1) == 0.0);

  for (int v = 0; v < 8; ++v) {
    const int a = v >> 2, b = (v >> 1) & 1, c = v & 1;
    const ProbTable222 t = bell::pr_box(a, b, c);
    CHECK(bell::chsh_variant(t, a, b, c) == doctest::Approx(4.0));
    CHECK(bell::classify(t) == bell::TableClass::PrType);
    CHECK(bell::pr_variant(t) == v);
    CHECK(bell::is_nonsignalling(t));
    CHECK_FALSE(bell::classical_membership(t));
    for (int w = 0; w < 8; ++w) {
      if (w != v) CHECK(std::fabs(bell::chsh_variant(t, w >> 2, (w >> 1) & 1, w & 1)) <= 4.0 + 1e-12);
    }
  }
}

TEST_CASE("classical membership agrees with the facet description") {
  std::mt19937_64 rng(7);
  const auto& det = bell::deterministic_tables();
  std::vector<ProbTable222> ns_vertices(det.begin(), det.end());
  for (int v = 0; v < 8; ++v) ns_vertices.push_back(bell::pr_box(v >> 2, (v >> 1) & 1, v & 1));
  int local = 0, nonlocal = 0;
  for (int t = 0; t < 1000; ++t) {
    // sparse mixtures hit both sides of the boundary often
    const auto w = dirichlet(rng, 3);
    std::uniform_int_distribution<int> pick(0, 23);
    const ProbTable222 m = mix({{w[0], ns_vertices[static_cast<std::size_t>(pick(rng))]},
                                {w[1], ns_vertices[static_cast<std::size_t>(pick(rng))]},
                                {w[2], ns_vertices[static_cast<std::size_t>(pick(rng))]}});
    const auto model = bell::classical_membership(m);
    CAPTURE(t);
    CHECK(model.has_value() == LocalOracle::local(m, 1e-9));
    if (model) {
      ++local;
      const ProbTable222 back = bell::mixture(*model);
      for (int i = 0; i < 16; ++i) CHECK(std::fabs(back.p[static_cast<std::size_t>(i)] - m.p[static_cast<std::size_t>(i)]) <= bell::kModelTolerance);
      for (double x : model->weights) CHECK(x >= -1e-12);
    } else {
      ++nonlocal;
    }
  }
  CHECK(local > 100);
  CHECK(nonlocal > 100);
}

TEST_CASE("signalling tables are detected") {
  // Bob's outcome copies Alice's input
  ProbTable222 t;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      t.p[bell::table_index(x, y, 1, x == 0 ? -1 : 1)] = 1.0;
    }
  }
  t.validate();
  CHECK_FALSE(bell::is_nonsignalling(t));
  CHECK_FALSE(LocalOracle::nonsignalling(t));
  CHECK_FALSE(bell::classical_membership(t));
  CHECK(bell::classify(t) == bell::TableClass::Deterministic);
}

TEST_CASE("invalid tables") {
  std::vector<double> v(16, 0.25);
  CHECK_NOTHROW(ProbTable222::from_flat(v));
  v[0] = -0.25;
  v[1] = 0.75;
  CHECK(code_of([&] { ProbTable222::from_flat(v); }) == ErrorCode::InvalidTable);
  std::vector<double> u(16, 0.3);
  CHECK(code_of([&] { ProbTable222::from_flat(u); }) == ErrorCode::InvalidTable);
  std::vector<double> w(15, 0.25);
  CHECK(code_of([&] { ProbTable222::from_flat(w); }) == ErrorCode::InvalidTable);
}

TEST_CASE("quantum tables are non-signalling") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const CMatrix rho = random_density_matrix(4, rng);
    const auto setup = bell::setup_from_observables(rho, {random_observable(rng), random_observable(rng)},
                                                    {random_observable(rng), random_observable(rng)});
    const ProbTable222 q = bell::quantum_table(setup);
    CHECK(LocalOracle::nonsignalling(q, 1e-12));
    CHECK(bell::is_nonsignalling(q));
    CHECK(std::fabs(bell::chsh(q)) <= kTsirelson + 1e-9);
    CHECK(std::fabs(bell::chsh(q)) <= bell::chsh_operator_norm(setup) + 1e-9);
  }
}

TEST_CASE("singlet reaches the Tsirelson bound") {
  const auto plain = bell::singlet_setup(false);
  CHECK(bell::chsh(bell::quantum_table(plain)) == doctest::Approx(-kTsirelson).epsilon(1e-12));
  const auto relabelled = bell::singlet_setup(true);
  const ProbTable222 q = bell::quantum_table(relabelled);
  CHECK(bell::chsh(q) == doctest::Approx(kTsirelson).epsilon(1e-12));
  CHECK(bell::chsh_operator_norm(relabelled) == doctest::Approx(kTsirelson).epsilon(1e-12));
  CHECK_FALSE(bell::classical_membership(q));
  CHECK(bell::classify(q) == bell::TableClass::Other);
  // singlet correlators are -cos(angle difference)
  CHECK(LocalOracle::correlator(bell::quantum_table(plain), 0, 0) == doctest::Approx(-std::cos(M_PI / 4)));
}

TEST_CASE("invalid quantum setups") {
  auto s = bell::singlet_setup();
  s.alice[0][0] *= 2.0;
  CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidSetup);
  auto r = bell::singlet_setup();
  r.state *= 0.5;
  CHECK(code_of([&] { bell::quantum_table(r); }) == ErrorCode::InvalidSetup);
}

TEST_CASE("see-saw climbs monotonically to the Tsirelson bound") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    const auto r = bell::maximize_chsh_quantum(seed, 50);
    REQUIRE(r.trace.size() == 51);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] >= r.trace[k - 1] - 1e-12);
    CHECK(r.value == doctest::Approx(kTsirelson).epsilon(1e-9));
    CHECK(bell::chsh(bell::quantum_table(r.setup)) == doctest::Approx(r.value).epsilon(1e-12));
  }
  // identity observables give CHSH = 2 and a completely degenerate first step
  const CMatrix id = CMatrix::Identity(2, 2);
  const auto d = bell::maximize_chsh_quantum({id, id}, {id, id}, 5, 50);
  CHECK(d.trace.front() == doctest::Approx(2.0));
  for (std::size_t k = 1; k < d.trace.size(); ++k) CHECK(d.trace[k] >= d.trace[k - 1] - 1e-12);
  CHECK(d.value == doctest::Approx(kTsirelson).epsilon(1e-9));

  const auto a = bell::maximize_chsh_quantum(9, 20);
  const auto b = bell::maximize_chsh_quantum(9, 20);
  CHECK(a.trace == b.trace);
  CHECK(code_of([] { bell::maximize_chsh_quantum(0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("tables from gbit composite states") {
  const StateSpace g = make_gbit();
  const CompositeSpace mx = max_tensor(g, g);
  const auto& verts = mx.vertices();
  REQUIRE(verts.size() == 24);
  int deterministic = 0;
  std::set<int> variants;
  Eigen::MatrixXd diffs(16, 23);
  const ProbTable222 t0 = bell::table_from_composite_state(verts[0]);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const ProbTable222 t = bell::table_from_composite_state(verts[i]);
    CHECK(LocalOracle::nonsignalling(t));
    if (bell::classify(t) == bell::TableClass::Deterministic) ++deterministic;
    if (auto v = bell::pr_variant(t)) variants.insert(*v);
    if (i > 0) {
      for (int k = 0; k < 16; ++k) diffs(k, static_cast<Eigen::Index>(i - 1)) = t.p[static_cast<std::size_t>(k)] - t0.p[static_cast<std::size_t>(k)];
    }
  }
  CHECK(deterministic == 16);
  CHECK(variants.size() == 8);
  // the image is 8-dimensional, the same as the vertex set: the map is injective on Omega_max
  Eigen::MatrixXd vd(9, 23);
  for (std::size_t i = 1; i < verts.size(); ++i) vd.col(static_cast<Eigen::Index>(i - 1)) = verts[i] - verts[0];
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(diffs).rank() == 8);
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(vd).rank() == 8);

  // product of x-eigen vertices: deterministic
  const ProbTable222 p = bell::table_from_composite_state(product_state(g.vertex(2), g.vertex(2)));
  CHECK(bell::classify(p) == bell::TableClass::Deterministic);

  Eigen::VectorXd bad = Eigen::VectorXd::Zero(9);
  bad(0) = 3.0;
  bad(8) = 1.0;
  CHECK(code_of([&] { bell::table_from_composite_state(bad); }) == ErrorCode::NotAState);
  CHECK(code_of([] { bell::table_from_composite_state(Eigen::VectorXd::Zero(4)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("uniform, product and relabelled tables") {
  ProbTable222 uniform;
  uniform.p.fill(0.25);
  CHECK(bell::is_nonsignalling(uniform));
  CHECK(bell::chsh(uniform) == 0.0);
  CHECK(bell::classical_membership(uniform).has_value());

  // a deterministic table is its own hidden-variable model
  const auto& det = bell::deterministic_tables();
  for (std::size_t k = 0; k < 16; ++k) {
    const auto model = bell::classical_membership(det[k]);
    REQUIRE(model);
    CHECK(model->weights[k] == doctest::Approx(1.0).epsilon(1e-9));
  }

  // pr_box(0,0,1) is pr_box(0,0,0) with Bob's outcome flipped
  const ProbTable222 pr = bell::pr_box(0, 0, 0), flipped = bell::pr_box(0, 0, 1);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) CHECK(flipped(a, b, x, y) == pr(a, -b, x, y));
      }
    }
  }
  // perfectly anticorrelated on (1,1)
  CHECK(pr(1, 1, 1, 1) + pr(-1, -1, 1, 1) == 0.0);
}

TEST_CASE("quantum tables contain the classical ones") {
  const CMatrix z = sigma_z();
  CMatrix zero = CMatrix::Zero(4, 4);
  zero(0, 0) = 1.0;  // |00>
  for (int k = 0; k < 16; ++k) {
    const double sign[2] = {-1.0, 1.0};
    const std::array<CMatrix, 2> alice{sign[(k >> 3) & 1] * z, sign[(k >> 2) & 1] * z};
    const std::array<CMatrix, 2> bob{sign[(k >> 1) & 1] * z, sign[k & 1] * z};
    const ProbTable222 q = bell::quantum_table(bell::setup_from_observables(zero, alice, bob));
    for (int i = 0; i < 16; ++i) {
      CHECK(std::fabs(q.p[static_cast<std::size_t>(i)] - bell::deterministic_tables()[static_cast<std::size_t>(k)].p[static_cast<std::size_t>(i)]) < 1e-15);
    }
  }

  // maximally mixed state gives the uniform table; product states are classical
  std::mt19937_64 rng(21);
  const auto s = bell::setup_from_observables(CMatrix::Identity(4, 4) / 4.0, {random_observable(rng), random_observable(rng)},
                                              {random_observable(rng), random_observable(rng)});
  for (double v : bell::quantum_table(s).p) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
  for (int t = 0; t < 50; ++t) {
    const CMatrix prod = kron(random_density_matrix(2, rng), random_density_matrix(2, rng));
    const auto p = bell::setup_from_observables(prod, {random_observable(rng), random_observable(rng)},
                                                {random_observable(rng), random_observable(rng)});
    CHECK(bell::classical_membership(bell::quantum_table(p)).has_value());
  }
}

TEST_CASE("the 24 gbit composite vertices give 24 distinct tables") {
  const StateSpace g = make_gbit();
  const CompositeSpace gg = max_tensor(g, g);
  const auto& verts = gg.vertices();
  std::vector<ProbTable222> tables;
  for (const auto& v : verts) tables.push_back(bell::table_from_composite_state(v));
  double closest = 1e300;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < 16; ++k) d = std::max(d, std::fabs(tables[i].p[k] - tables[j].p[k]));
      closest = std::min(closest, d);
    }
  }
  CHECK(closest > 0.1);
  CHECK(bell::classify(bell::table_from_composite_state(product_state(g.vertex(0), g.vertex(0)))) ==
        bell::TableClass::Deterministic);
  bool has_pr000 = false;
  for (const auto& t : tables) has_pr000 = has_pr000 || bell::pr_variant(t) == 0;
  CHECK(has_pr000);
}
