#pragma once

// Finite-dimensional state spaces, effects, measurements and linear maps.
//
// Three representations are supported:
//   Polytopic: Omega is the convex hull of an explicit, minimal vertex list.
//   Quantum:   density matrices of size N, in the Hermitian coordinates of
//              hermitian.hpp (ambient dimension N^2).
//   Ball:      vectors (1, r) with |r| <= 1 in R^(d+1).
//
// Effects are taken to be the full dual interval {e : 0 <= e(w) <= 1 on Omega}.

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace gptkit {

enum class SpaceKind { Polytopic, Quantum, Ball };

std::string_view to_string(SpaceKind kind);

inline constexpr std::uint64_t kDefaultSampleSeed = 20210901;
inline constexpr int kDefaultSampleCount = 1000;

class StateSpace {
 public:
  /// Vertices are the columns of `vertices`. Throws InvalidArgument if a
  /// vertex is not normalized by `unit` or is not extremal.
  static StateSpace polytopic(Eigen::MatrixXd vertices, Eigen::VectorXd unit);
  /// Same, but skips the extremality LP (callers that already certified it).
  static StateSpace polytopic_trusted(Eigen::MatrixXd vertices, Eigen::VectorXd unit);
  static StateSpace quantum(int n);
  static StateSpace ball(int d);

  SpaceKind kind() const { return kind_; }
  Eigen::Index ambient_dim() const { return unit_.size(); }
  const Eigen::VectorXd& unit() const { return unit_; }

  // Polytopic only.
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  Eigen::Index num_vertices() const { return vertices_.cols(); }
  Eigen::VectorXd vertex(Eigen::Index i) const { return vertices_.col(i); }

  int hilbert_dim() const { return n_; }  // Quantum only
  int ball_dim() const { return d_; }     // Ball only

 private:
  StateSpace() = default;

  SpaceKind kind_ = SpaceKind::Polytopic;
  Eigen::MatrixXd vertices_;
  Eigen::VectorXd unit_;
  int n_ = 0;
  int d_ = 0;
};

struct Effect {
  Eigen::VectorXd coeffs;

  double operator()(const Eigen::VectorXd& state) const { return coeffs.dot(state); }
};

/// A finite list of effects summing to the unit functional.
class Measurement {
 public:
  /// Throws InvalidArgument unless every effect is valid on `space` and the
  /// effects sum to its unit functional within tolerance.
  static Measurement create(const StateSpace& space, std::vector<Effect> effects);

  const std::vector<Effect>& effects() const { return effects_; }
  std::size_t size() const { return effects_.size(); }
  const Effect& operator[](std::size_t i) const { return effects_[i]; }

 private:
  explicit Measurement(std::vector<Effect> effects) : effects_(std::move(effects)) {}
  std::vector<Effect> effects_;
};

struct LinearMap {
  Eigen::MatrixXd matrix;

  Eigen::Index in_dim() const { return matrix.cols(); }
  Eigen::Index out_dim() const { return matrix.rows(); }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return matrix * x; }

  /// Square and smallest singular value >= 1e-10 * largest.
  bool invertible() const;
};

StateSpace make_classical(int n);
StateSpace make_quantum(int n);
StateSpace make_gbit();
StateSpace make_ball(int d);

/// The gbit effects e^(x), ebar^(x), e^(y), ebar^(y).
Effect gbit_effect_x();
Effect gbit_effect_x_bar();
Effect gbit_effect_y();
Effect gbit_effect_y_bar();

bool contains_state(const StateSpace& space, const Eigen::VectorXd& x);
bool is_effect(const StateSpace& space, const Effect& e);
/// Throws NotAState if omega is not in the space.
bool is_pure(const StateSpace& space, const Eigen::VectorXd& omega);

/// Checks that T maps Omega into Omega. For Quantum and Ball spaces the
/// positivity part is checked on seeded pure-state samples (can refute, only
/// confirms probabilistically). Complete positivity is not checked.
bool is_transformation(const StateSpace& space, const LinearMap& t,
                       std::uint64_t seed = kDefaultSampleSeed);
/// Additionally requires T invertible with T(Omega) == Omega.
bool is_reversible_transformation(const StateSpace& space, const LinearMap& t,
                                  std::uint64_t seed = kDefaultSampleSeed);

/// True iff L is invertible with L(Omega_A) = Omega_B. Spaces of different
/// dimension are never equivalent. Throws DimensionMismatch if L does not map
/// A's ambient space to B's and SingularMap for a square singular L.
/// Non-polytopic sides are checked on kDefaultSampleCount seeded pure states.
bool are_equivalent(const StateSpace& a, const StateSpace& b, const LinearMap& l,
                    std::uint64_t seed = kDefaultSampleSeed);

/// Pure states drawn from a seeded generator (extreme points of Omega).
/// Polytopic spaces return their vertices cyclically.
std::vector<Eigen::VectorXd> sample_pure_states(const StateSpace& space, int count,
                                                std::uint64_t seed);

}  // namespace gptkit
