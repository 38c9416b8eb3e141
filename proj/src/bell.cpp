#include "gptkit/bell.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gptkit/composites.hpp"
#include "gptkit/error.hpp"
#include "gptkit/lp.hpp"
#include "gptkit/state_space.hpp"

namespace gptkit::bell {

namespace {

constexpr double kClassifyTolerance = 1e-8;
constexpr double kSignTolerance = 1e-12;

// CHSH coefficients s_xy: +1 except s_11 = -1.
constexpr double chsh_sign(int x, int y) { return x == 1 && y == 1 ? -1.0 : 1.0; }

}  // namespace

void ProbTable222::validate() const {
  for (double v : p) {
    if (!std::isfinite(v) || v < -kNegativityTolerance) {
      fail(ErrorCode::InvalidTable, "probability table has a negative or non-finite entry");
    }
  }
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double s = 0.0;
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) s += (*this)(a, b, x, y);
      }
      if (std::fabs(s - 1.0) > kTableTolerance) {
        fail(ErrorCode::InvalidTable, "probabilities for inputs (" + std::to_string(x) + "," +
                                          std::to_string(y) + ") do not sum to 1");
      }
    }
  }
}

ProbTable222 ProbTable222::from_flat(std::span<const double> values) {
  if (values.size() != 16) fail(ErrorCode::InvalidTable, "a (2,2,2) table has 16 entries");
  ProbTable222 t;
  std::copy(values.begin(), values.end(), t.p.begin());
  t.validate();
  return t;
}

void QubitBellSetup::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidSetup, what); };
  if (state.rows() != 4 || state.cols() != 4) bad("state must be 4x4");
  if (!is_hermitian(state, kTableTolerance)) bad("state is not Hermitian");
  if (std::fabs(state.trace().real() - 1.0) > kTableTolerance) bad("state trace is not 1");
  if (hermitian_eigenvalues(state)(0) < -kTableTolerance) bad("state is not positive");
  const CMatrix id = CMatrix::Identity(2, 2);
  for (const auto* party : {&alice, &bob}) {
    for (const auto& pair : *party) {
      for (const CMatrix& e : pair) {
        if (e.rows() != 2 || e.cols() != 2) bad("effects must be 2x2");
        if (!is_hermitian(e, kTableTolerance)) bad("effect is not Hermitian");
        if (hermitian_eigenvalues(e)(0) < -kTableTolerance) bad("effect is not positive");
      }
      if ((pair[0] + pair[1] - id).cwiseAbs().maxCoeff() > kTableTolerance) {
        bad("effect pair does not sum to the identity");
      }
    }
  }
}

bool is_nonsignalling(const ProbTable222& t) {
  t.validate();
  for (int x = 0; x < 2; ++x) {
    for (int a : {-1, 1}) {
      const double m0 = t(a, -1, x, 0) + t(a, 1, x, 0);
      const double m1 = t(a, -1, x, 1) + t(a, 1, x, 1);
      if (std::fabs(m0 - m1) > kTableTolerance) return false;
    }
  }
  for (int y = 0; y < 2; ++y) {
    for (int b : {-1, 1}) {
      const double m0 = t(-1, b, 0, y) + t(1, b, 0, y);
      const double m1 = t(-1, b, 1, y) + t(1, b, 1, y);
      if (std::fabs(m0 - m1) > kTableTolerance) return false;
    }
  }
  return true;
}

const std::vector<ProbTable222>& deterministic_tables() {
  static const std::vector<ProbTable222> tables = [] {
    std::vector<ProbTable222> out;
    for (int k = 0; k < 16; ++k) {
      const int f[2] = {(k >> 3) & 1, (k >> 2) & 1};
      const int g[2] = {(k >> 1) & 1, k & 1};
      ProbTable222 t;
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          t.p[static_cast<std::size_t>(8 * x + 4 * y + 2 * f[x] + g[y])] = 1.0;
        }
      }
      out.push_back(t);
    }
    return out;
  }();
  return tables;
}

ProbTable222 mixture(const HiddenVariableModel& model) {
  ProbTable222 t;
  const auto& det = deterministic_tables();
  for (std::size_t k = 0; k < 16; ++k) {
    for (std::size_t i = 0; i < 16; ++i) t.p[i] += model.weights[k] * det[k].p[i];
  }
  return t;
}

std::optional<HiddenVariableModel> classical_membership(const ProbTable222& table) {
  table.validate();
  const auto& det = deterministic_tables();
  lp::LpProblem problem(16);
  for (std::size_t i = 0; i < 16; ++i) {
    Eigen::RowVectorXd row(16);
    for (std::size_t k = 0; k < 16; ++k) row(static_cast<Eigen::Index>(k)) = det[k].p[i];
    problem.add_equality(row, table.p[i]);
  }
  problem.add_equality(Eigen::RowVectorXd::Ones(16), 1.0);
  const lp::LpResult r = lp::solve(problem);
  if (!r.optimal()) return std::nullopt;
  HiddenVariableModel model;
  for (std::size_t k = 0; k < 16; ++k) model.weights[k] = (*r.solution)(static_cast<Eigen::Index>(k));
  const ProbTable222 back = mixture(model);
  for (std::size_t i = 0; i < 16; ++i) {
    if (std::fabs(back.p[i] - table.p[i]) > kModelTolerance) {
      fail(ErrorCode::NumericalFailure, "hidden-variable model does not reproduce the table");
    }
  }
  return model;
}

double expectation(const ProbTable222& t, int x, int y) {
  return t(1, 1, x, y) + t(-1, -1, x, y) - t(1, -1, x, y) - t(-1, 1, x, y);
}

double chsh(const ProbTable222& t) { return chsh_variant(t, 0, 0, 0); }

double chsh_variant(const ProbTable222& t, int alpha, int beta, int gamma) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const int parity = (x * y + alpha * x + beta * y + gamma) & 1;
      s += (parity ? -1.0 : 1.0) * expectation(t, x, y);
    }
  }
  return s;
}

ProbTable222 pr_box(int alpha, int beta, int gamma) {
  ProbTable222 t;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const int parity = (x * y + alpha * x + beta * y + gamma) & 1;
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
          // a b = (-1)^parity  <=>  (a' xor b') == parity
          const int differ = outcome_bit(a) ^ outcome_bit(b);
          t.p[table_index(x, y, a, b)] = differ == parity ? 0.5 : 0.0;
        }
      }
    }
  }
  return t;
}

ProbTable222 quantum_table(const QubitBellSetup& setup) {
  setup.validate();
  ProbTable222 t;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
          const CMatrix op = kron(setup.alice[static_cast<std::size_t>(x)][static_cast<std::size_t>(outcome_bit(a))],
                                  setup.bob[static_cast<std::size_t>(y)][static_cast<std::size_t>(outcome_bit(b))]);
          t.p[table_index(x, y, a, b)] = std::max(0.0, (setup.state * op).trace().real());
        }
      }
    }
  }
  return t;
}

QubitBellSetup setup_from_observables(const CMatrix& state, const std::array<CMatrix, 2>& alice,
                                      const std::array<CMatrix, 2>& bob) {
  const CMatrix id = CMatrix::Identity(2, 2);
  QubitBellSetup s;
  s.state = state;
  for (std::size_t k = 0; k < 2; ++k) {
    s.alice[k] = {0.5 * (id - alice[k]), 0.5 * (id + alice[k])};
    s.bob[k] = {0.5 * (id - bob[k]), 0.5 * (id + bob[k])};
  }
  return s;
}

CMatrix xz_observable(double angle) {
  CMatrix o(2, 2);
  o << std::cos(angle), std::sin(angle), std::sin(angle), -std::cos(angle);
  return o;
}

namespace {

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

CMatrix singlet_state() {
  CVector psi = CVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);   // |01>
  psi(2) = -1.0 / std::sqrt(2.0);  // |10>
  return projector(psi);
}

CMatrix phi_plus_state() {
  CVector psi = CVector::Zero(4);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(3) = 1.0 / std::sqrt(2.0);
  return projector(psi);
}

std::array<CMatrix, 2> observables(const std::array<std::array<CMatrix, 2>, 2>& effects) {
  return {effects[0][1] - effects[0][0], effects[1][1] - effects[1][0]};
}

// conditional_on_b: tr_A[(X (x) 1) rho]. conditional_on_a: tr_B[(1 (x) X) rho].
CMatrix conditional_on_b(const CMatrix& rho, const CMatrix& a_op) {
  const CMatrix m = kron(a_op, CMatrix::Identity(2, 2)) * rho;
  CMatrix out = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) out += m.block(2 * i, 2 * i, 2, 2);
  return out;
}

CMatrix conditional_on_a(const CMatrix& rho, const CMatrix& b_op) {
  const CMatrix m = kron(CMatrix::Identity(2, 2), b_op) * rho;
  CMatrix out = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) out(i, k) += m(2 * i + j, 2 * k + j);
    }
  }
  return out;
}

// Observable maximizing Re tr(C O) over -1 <= O <= 1. tr(C O) is real for
// Hermitian O, and the maximizer is the sign of the Hermitian part of C^dagger.
CMatrix best_response(const CMatrix& c, std::mt19937_64& rng) {
  const CMatrix h = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  CMatrix vecs = eig.eigenvectors();
  const Eigen::VectorXd& vals = eig.eigenvalues();
  std::vector<Eigen::Index> null;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (std::fabs(vals(i)) <= kSignTolerance * std::max(1.0, h.cwiseAbs().maxCoeff())) null.push_back(i);
  }
  if (!null.empty()) {
    const auto k = static_cast<int>(null.size());
    CMatrix block(vecs.rows(), k);
    for (int j = 0; j < k; ++j) block.col(j) = vecs.col(null[static_cast<std::size_t>(j)]);
    block = block * random_unitary(k, rng);
    for (int j = 0; j < k; ++j) vecs.col(null[static_cast<std::size_t>(j)]) = block.col(j);
  }
  std::bernoulli_distribution coin(0.5);
  CMatrix o = CMatrix::Zero(h.rows(), h.cols());
  std::size_t next_null = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double sign;
    if (next_null < null.size() && null[next_null] == i) {
      sign = coin(rng) ? 1.0 : -1.0;
      ++next_null;
    } else {
      sign = vals(i) > 0.0 ? 1.0 : -1.0;
    }
    o += sign * vecs.col(i) * vecs.col(i).adjoint();
  }
  return o;
}

double chsh_value(const CMatrix& rho, const std::array<CMatrix, 2>& a,
                  const std::array<CMatrix, 2>& b) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      s += chsh_sign(x, y) *
           (rho * kron(a[static_cast<std::size_t>(x)], b[static_cast<std::size_t>(y)])).trace().real();
    }
  }
  return s;
}

}  // namespace

QubitBellSetup singlet_setup(bool relabel_bob) {
  const double pi = std::acos(-1.0);
  const double sign = relabel_bob ? -1.0 : 1.0;
  return setup_from_observables(singlet_state(), {xz_observable(0.0), xz_observable(pi / 2)},
                                {sign * xz_observable(pi / 4), sign * xz_observable(-pi / 4)});
}

double chsh_operator_norm(const QubitBellSetup& setup) {
  setup.validate();
  const auto a = observables(setup.alice);
  const auto b = observables(setup.bob);
  const CMatrix s = kron(a[0], b[0] + b[1]) + kron(a[1], b[0] - b[1]);
  const Eigen::VectorXd ev = hermitian_eigenvalues(s);
  return std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
}

SeeSawResult maximize_chsh_quantum(const std::array<CMatrix, 2>& alice_start,
                                   const std::array<CMatrix, 2>& bob_start, std::uint64_t seed,
                                   int iterations) {
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "see-saw needs at least one iteration");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const CMatrix rho = phi_plus_state();
  std::array<CMatrix, 2> a = alice_start;
  std::array<CMatrix, 2> b = bob_start;

  SeeSawResult result;
  result.trace.push_back(chsh_value(rho, a, b));
  for (int it = 0; it < iterations; ++it) {
    for (int x = 0; x < 2; ++x) {
      CMatrix c = CMatrix::Zero(2, 2);
      for (int y = 0; y < 2; ++y) c += chsh_sign(x, y) * conditional_on_a(rho, b[static_cast<std::size_t>(y)]);
      // sum_y s_xy tr(rho (A (x) B_y)) = tr(A C)
      a[static_cast<std::size_t>(x)] = best_response(c, rng);
    }
    for (int y = 0; y < 2; ++y) {
      CMatrix d = CMatrix::Zero(2, 2);
      for (int x = 0; x < 2; ++x) d += chsh_sign(x, y) * conditional_on_b(rho, a[static_cast<std::size_t>(x)]);
      b[static_cast<std::size_t>(y)] = best_response(d, rng);
    }
    result.trace.push_back(chsh_value(rho, a, b));
  }
  result.value = result.trace.back();
  result.setup = setup_from_observables(rho, a, b);
  return result;
}

SeeSawResult maximize_chsh_quantum(std::uint64_t seed, int iterations) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const CMatrix sx = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
  const CMatrix sy = (CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  const CMatrix sz = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
  auto random_observable = [&] {
    Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
    n.normalize();
    return CMatrix(n(0) * sx + n(1) * sy + n(2) * sz);
  };
  const std::array<CMatrix, 2> a{random_observable(), random_observable()};
  const std::array<CMatrix, 2> b{random_observable(), random_observable()};
  return maximize_chsh_quantum(a, b, seed, iterations);
}

ProbTable222 table_from_composite_state(const Eigen::VectorXd& omega) {
  static const CompositeSpace composite = max_tensor(make_gbit(), make_gbit());
  if (omega.size() != composite.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, "gbit composite states have 9 coordinates");
  }
  if (!composite.contains(omega)) {
    fail(ErrorCode::NotAState, "state is not in the maximal tensor product of two gbits");
  }
  // effects[x][a'] on one gbit
  const std::array<std::array<Effect, 2>, 2> effects{
      {{gbit_effect_x_bar(), gbit_effect_x()}, {gbit_effect_y_bar(), gbit_effect_y()}}};
  ProbTable222 t;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
          const Eigen::VectorXd e =
              kron(effects[static_cast<std::size_t>(x)][static_cast<std::size_t>(outcome_bit(a))].coeffs,
                   effects[static_cast<std::size_t>(y)][static_cast<std::size_t>(outcome_bit(b))].coeffs);
          t.p[table_index(x, y, a, b)] = std::max(0.0, e.dot(omega));
        }
      }
    }
  }
  return t;
}

const char* to_string(TableClass c) {
  switch (c) {
    case TableClass::Deterministic:
      return "deterministic";
    case TableClass::PrType:
      return "pr";
    case TableClass::Other:
      return "other";
  }
  return "unknown";
}

std::optional<int> pr_variant(const ProbTable222& table) {
  for (int k = 0; k < 8; ++k) {
    const ProbTable222 pr = pr_box((k >> 2) & 1, (k >> 1) & 1, k & 1);
    bool match = true;
    for (std::size_t i = 0; i < 16 && match; ++i) {
      match = std::fabs(pr.p[i] - table.p[i]) <= kClassifyTolerance;
    }
    if (match) return k;
  }
  return std::nullopt;
}

TableClass classify(const ProbTable222& table) {
  const bool deterministic = std::all_of(table.p.begin(), table.p.end(), [](double v) {
    return std::fabs(v) <= kClassifyTolerance || std::fabs(v - 1.0) <= kClassifyTolerance;
  });
  if (deterministic) return TableClass::Deterministic;
  if (pr_variant(table)) return TableClass::PrType;
  return TableClass::Other;
}

}  // namespace gptkit::bell
