#pragma once

// The (2,2,2) Bell scenario: two parties, two inputs x, y in {0, 1} and two
// outcomes a, b in {-1, +1} each.
//
// Tables are flattened lexicographically in (x, y, a, b) with -1 before +1,
// i.e. index = 8x + 4y + 2a' + b' where v' = (v + 1) / 2.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gptkit/hermitian.hpp"

namespace gptkit::bell {

inline constexpr double kTableTolerance = 1e-9;
inline constexpr double kNegativityTolerance = 1e-12;
inline constexpr double kModelTolerance = 1e-7;

constexpr int outcome_bit(int v) { return (v + 1) / 2; }

constexpr std::size_t table_index(int x, int y, int a, int b) {
  return static_cast<std::size_t>(8 * x + 4 * y + 2 * outcome_bit(a) + outcome_bit(b));
}

struct ProbTable222 {
  std::array<double, 16> p{};

  /// P(a, b | x, y) with a, b in {-1, +1}.
  double operator()(int a, int b, int x, int y) const { return p[table_index(x, y, a, b)]; }

  /// Throws InvalidTable unless the values form a valid table.
  static ProbTable222 from_flat(std::span<const double> values);
  /// Throws InvalidTable on negative entries or unnormalized rows.
  void validate() const;
};

struct HiddenVariableModel {
  /// Weights over deterministic_tables(), in that order.
  std::array<double, 16> weights{};
};

/// Two-qubit state and dichotomic POVMs. alice[x][a'] is E_x^a and
/// bob[y][b'] is F_y^b, with a' = (a + 1) / 2.
struct QubitBellSetup {
  CMatrix state;
  std::array<std::array<CMatrix, 2>, 2> alice;
  std::array<std::array<CMatrix, 2>, 2> bob;

  /// Throws InvalidSetup unless the state is a density matrix and every pair
  /// of effects is positive and sums to the identity.
  void validate() const;
};

bool is_nonsignalling(const ProbTable222& table);

/// The 16 tables P(a,b|x,y) = delta(a, f(x)) delta(b, g(y)); table k uses
/// f(0)' = bit 3, f(1)' = bit 2, g(0)' = bit 1, g(1)' = bit 0 of k.
const std::vector<ProbTable222>& deterministic_tables();

/// LP over weights on the deterministic tables; nullopt if the table is not
/// classical. The returned mixture reproduces the table within 1e-7.
std::optional<HiddenVariableModel> classical_membership(const ProbTable222& table);

ProbTable222 mixture(const HiddenVariableModel& model);

/// E_{x,y} = P(++) + P(--) - P(+-) - P(-+).
double expectation(const ProbTable222& table, int x, int y);
/// E_00 + E_01 + E_10 - E_11.
double chsh(const ProbTable222& table);
/// sum_xy (-1)^(xy + alpha x + beta y + gamma) E_xy; (0,0,0) is chsh().
double chsh_variant(const ProbTable222& table, int alpha, int beta, int gamma);

/// P = 1/2 where a b = (-1)^(xy + alpha x + beta y + gamma), else 0.
ProbTable222 pr_box(int alpha, int beta, int gamma);

/// P(a,b|x,y) = tr[rho (E_x^a (x) F_y^b)].
ProbTable222 quantum_table(const QubitBellSetup& setup);

/// Setup from +-1 observables: E_x^{+-} = (1 +- A_x) / 2 etc.
QubitBellSetup setup_from_observables(const CMatrix& state, const std::array<CMatrix, 2>& alice,
                                      const std::array<CMatrix, 2>& bob);

/// Observable cos(t) sigma_z + sin(t) sigma_x.
CMatrix xz_observable(double angle);

/// Singlet with Alice at angles {0, pi/2} and Bob at {pi/4, -pi/4} in the
/// x-z plane. With `relabel_bob` Bob reports +1 for spin anti-aligned with
/// his axis, which turns the singlet anticorrelation into CHSH = +2 sqrt2.
QubitBellSetup singlet_setup(bool relabel_bob = true);

/// Largest |eigenvalue| of A0(B0+B1) + A1(B0-B1) with A_x = E_x^+ - E_x^-.
double chsh_operator_norm(const QubitBellSetup& setup);

struct SeeSawResult {
  double value = 0.0;
  QubitBellSetup setup;
  /// trace[0] is the starting value, trace[k] the value after iteration k.
  std::vector<double> trace;
};

/// See-saw ascent on (|00> + |11>)/sqrt2: each iteration replaces Alice's
/// observables by sign(conditional operator), then Bob's. Zero eigenvalues
/// are resolved with a seeded random basis and sign. The trace never
/// decreases (up to round-off).
SeeSawResult maximize_chsh_quantum(std::uint64_t seed, int iterations);

/// Same, from explicit starting observables.
SeeSawResult maximize_chsh_quantum(const std::array<CMatrix, 2>& alice_start,
                                   const std::array<CMatrix, 2>& bob_start, std::uint64_t seed,
                                   int iterations);

/// P(a,b|x,y) = (e_x^a (x) e_y^b)(omega) on the maximal tensor product of
/// two gbits, with x = 0 -> (e^(x), ebar^(x)) and x = 1 -> (e^(y), ebar^(y))
/// and a = +1 on the unbarred effect. Throws NotAState outside Omega_max.
ProbTable222 table_from_composite_state(const Eigen::VectorXd& omega);

enum class TableClass { Deterministic, PrType, Other };

const char* to_string(TableClass c);

/// Deterministic if every entry is within 1e-8 of 0 or 1; PR-type if within
/// 1e-8 of one of the eight pr_box variants.
TableClass classify(const ProbTable222& table);

/// (alpha, beta, gamma) packed as 4 alpha + 2 beta + gamma, if the table is
/// a PR box within 1e-8.
std::optional<int> pr_variant(const ProbTable222& table);

}  // namespace gptkit::bell
