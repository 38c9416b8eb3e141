#pragma once

// Qubit Bloch-ball geometry: density matrices <-> Bloch vectors, SU(2) ->
// SO(3), Haar averages over rotations and a few structural checks on balls
// and on how dimension and capacity scale under composition.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gptkit/hermitian.hpp"
#include "gptkit/state_space.hpp"

namespace gptkit::bloch {

using BlochVector = Eigen::Vector3d;

inline constexpr double kBlochTolerance = 1e-9;
inline constexpr int kMinInvariantSamples = 10;

/// sigma_x, sigma_y, sigma_z.
const std::array<CMatrix, 3>& pauli();

/// (1 + r . sigma) / 2. Throws NotAState if |r| > 1 + 1e-9.
CMatrix bloch_to_density(const BlochVector& r);
/// r_i = tr(rho sigma_i). Throws NotAState unless rho is a 2x2 density matrix.
BlochVector density_to_bloch(const CMatrix& rho);

/// The map (1, r1, r2, r3) -> Hermitian coordinates of bloch_to_density(r),
/// taking make_ball(3) onto make_quantum(2).
LinearMap qubit_equivalence_map();

/// R_ij = tr(sigma_i U sigma_j U^dagger) / 2. Throws NotUnitary unless U is a
/// 2x2 unitary within 1e-9.
Eigen::Matrix3d unitary_to_rotation(const CMatrix& u);

/// exp(-i angle n . sigma / 2) for a unit axis n.
CMatrix rotation_unitary(const Eigen::Vector3d& axis, double angle);

/// Haar-distributed rotations from normalized Gaussian quaternions.
std::vector<Eigen::Matrix3d> haar_rotations(int count, std::uint64_t seed);

/// Mean of T omega over the samples. Throws TooFewSamples for an empty list.
BlochVector group_average_state(const std::vector<Eigen::Matrix3d>& samples, const BlochVector& omega);

/// Averages a seeded random inner product G0 over the samples,
/// G = alpha avg_T T^T G0 T, with alpha chosen so that tr G = 3, i.e. unit
/// vectors have unit norm on average. Throws TooFewSamples below 10 samples.
Eigen::Matrix3d invariant_inner_product(const std::vector<Eigen::Matrix3d>& samples, std::uint64_t seed);

struct StrictConvexityReport {
  int dimension = 0;
  int pairs = 0;
  /// min over pairs and lambda in {0.1, ..., 0.9} of 1 - |lambda x + (1-lambda) y|.
  double min_gap = 1.0;
  bool strict = true;
};

/// Samples `trials` pairs of distinct unit vectors in R^d and checks that
/// proper convex combinations are strictly inside the ball. For d = 1 the
/// boundary is {-1, +1} and only that pair is checked.
StrictConvexityReport check_strict_convexity_ball(int d, int trials, std::uint64_t seed);

struct DimensionLawRow {
  std::string label;
  long k_a = 0, k_b = 0, k_ab = 0;
  int n_a = 0, n_b = 0, n_ab = 0;
  /// Verified product-witness bound N_A N_B (composites only).
  int lower_bound = 0;
  bool ok = false;
};

struct DimensionLawReport {
  /// Single systems, label "classical(N)" / "quantum(N)" with k_b = n_b = 1.
  std::vector<DimensionLawRow> single;
  /// Composites "classical(M)xclassical(N)" and "quantum(M)xquantum(N)".
  std::vector<DimensionLawRow> composite;
  bool ok = true;
};

/// K = N for classical and K = N^2 for quantum systems up to n_max, and
/// K_AB = K_A K_B, N_AB = N_A N_B for composites with M <= N <= n_max. Classical
/// composite capacities go through the LP capacity search on the minimal
/// tensor product, restricted to M N <= kMaxClassicalCompositeOutcomes.
DimensionLawReport check_dimension_law(int n_max);

inline constexpr int kMaxClassicalCompositeOutcomes = 25;

}  // namespace gptkit::bloch
