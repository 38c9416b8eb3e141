#pragma once

// Minimal and maximal tensor products of polytopic state spaces.
//
// Coordinates on AB are Kronecker coordinates: index i * K_B + j pairs
// coordinate i of A with coordinate j of B, so product states and product
// effects are plain Kronecker products and K_AB = K_A * K_B.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <mutex>
#include <string_view>
#include <vector>

#include "gptkit/state_space.hpp"

namespace gptkit {

enum class CompositeKind { Min, Max };
enum class Side { A, B };

std::string_view to_string(CompositeKind kind);

inline constexpr Eigen::Index kMaxConeDim = 10;
inline constexpr Eigen::Index kMaxCompositeDim = 16;
inline constexpr Eigen::Index kMaxCompositeInequalities = 64;

struct EffectConeGenerators {
  std::vector<Effect> generators;
};

/// Extreme rays of the effect cone of a polytopic space, each scaled so that
/// its largest value on a vertex is 1. Throws UnsupportedKind for non-polytopic
/// spaces and ScaleLimit above kMaxConeDim.
EffectConeGenerators effect_cone_generators(const StateSpace& space);

class CompositeSpace {
 public:
  CompositeKind kind() const { return kind_; }
  const StateSpace& factor_a() const { return a_; }
  const StateSpace& factor_b() const { return b_; }
  Eigen::Index ambient_dim() const { return unit_.size(); }
  const Eigen::VectorXd& unit() const { return unit_; }

  /// Min: the deduplicated product vertices (columns).
  const Eigen::MatrixXd& product_vertices() const { return product_vertices_; }
  /// Max: rows are the product generator effects e_i (x) f_j (>= 0 constraints).
  const Eigen::MatrixXd& inequalities() const { return inequalities_; }

  /// Min: LP membership in the convex hull of products. Max: normalization
  /// plus every product inequality, within tolerance.
  bool contains(const Eigen::VectorXd& x) const;

  /// The vertex list: products for Min, double-description enumeration for
  /// Max (computed once and cached; safe to call from several threads).
  const std::vector<Eigen::VectorXd>& vertices() const;

  /// The composite as a polytopic state space (enumerates for Max).
  StateSpace as_state_space() const;

 private:
  friend CompositeSpace min_tensor(const StateSpace&, const StateSpace&);
  friend CompositeSpace max_tensor(const StateSpace&, const StateSpace&);

  CompositeSpace(CompositeKind kind, StateSpace a, StateSpace b);

  struct VertexCache {
    std::once_flag once;
    std::vector<Eigen::VectorXd> vertices;
  };

  CompositeKind kind_;
  StateSpace a_;
  StateSpace b_;
  Eigen::VectorXd unit_;
  Eigen::MatrixXd product_vertices_;
  Eigen::MatrixXd inequalities_;
  std::shared_ptr<VertexCache> cache_;
};

/// Throws UnsupportedKind unless both factors are polytopic.
CompositeSpace min_tensor(const StateSpace& a, const StateSpace& b);
CompositeSpace max_tensor(const StateSpace& a, const StateSpace& b);

/// Vertex list of a Max composite, each certified extremal by LP. Throws
/// ScaleLimit beyond kMaxCompositeInequalities inequalities or
/// kMaxCompositeDim ambient dimensions, InvalidArgument for a Min composite.
std::vector<Eigen::VectorXd> enumerate_vertices(const CompositeSpace& composite);

Eigen::VectorXd product_state(const Eigen::VectorXd& omega_a, const Eigen::VectorXd& omega_b);

/// (1 (x) u_B)(omega) for Side::A, (u_A (x) 1)(omega) for Side::B.
/// Throws NotAState if omega is not in the composite.
Eigen::VectorXd reduced_state(const CompositeSpace& composite, const Eigen::VectorXd& omega,
                              Side side);

/// Same contraction for two quantum factors, where the composite is the
/// standard quantum tensor product (omega in product Hermitian coordinates).
Eigen::VectorXd reduced_state(const StateSpace& a, const StateSpace& b,
                              const Eigen::VectorXd& omega, Side side);

/// Is x (product Hermitian coordinates of na x nb) in the quantum maximal
/// tensor product? Normalization is exact; block positivity is checked on
/// `samples` seeded product pure effects, so a true answer is probabilistic.
bool quantum_max_tensor_contains_sampled(int na, int nb, const Eigen::VectorXd& x, int samples,
                                         std::uint64_t seed);

struct SupermultiplicativityReport {
  int capacity_a = 0;
  int capacity_b = 0;
  int lower_bound = 0;  // N_A * N_B once verified
  std::vector<Eigen::VectorXd> product_states;
  std::vector<Effect> product_effects;
  double max_delta_error = 0.0;
  bool verified = false;
};

/// Builds the N_A * N_B product states of maximal distinguishable factor sets
/// and the product measurement, then checks that the states lie in the
/// composite, the effects are valid on it and sum to u_AB, and
/// e_A^i (x) e_B^j (w_k (x) w_l) = delta.
SupermultiplicativityReport check_supermultiplicativity(const CompositeSpace& composite);

/// Two quantum factors: the composite is the standard tensor product.
/// Two polytopic factors: the minimal tensor product.
SupermultiplicativityReport check_supermultiplicativity(const StateSpace& a, const StateSpace& b);

}  // namespace gptkit
