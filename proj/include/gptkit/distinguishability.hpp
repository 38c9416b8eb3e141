#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "gptkit/state_space.hpp"

namespace gptkit {

/// Tolerance for the e_i(w_j) = delta_ij condition on returned witnesses.
inline constexpr double kWitnessTolerance = 1e-7;
/// Largest number of subsets capacity() will enumerate for one size.
inline constexpr std::uint64_t kMaxSubsetEnumeration = 1'000'000;

struct DistinguishabilityWitness {
  Measurement measurement;
  std::vector<Eigen::VectorXd> states;
};

/// Returns a measurement with e_i(w_j) = delta_ij if one exists.
///
/// Polytopic: one joint LP over all effect blocks. Quantum: the supports must
/// be pairwise orthogonal; the witness is projective. Ball: at most two
/// states, which must be antipodal pure states.
///
/// Throws NotAState / DimensionMismatch for bad inputs.
std::optional<DistinguishabilityWitness> perfectly_distinguishable(
    const StateSpace& space, const std::vector<Eigen::VectorXd>& states);

/// Largest n <= n_max such that some n-subset of `candidates` is perfectly
/// distinguishable. Empty candidates on a polytopic space means the vertex
/// list. Quantum and Ball spaces are answered analytically (N and 2).
///
/// Throws InvalidArgument if n_max < 1 and ScaleLimit if a subset size would
/// need more than kMaxSubsetEnumeration LPs.
int capacity(const StateSpace& space, const std::vector<Eigen::VectorXd>& candidates, int n_max);

/// A largest distinguishable set together with its witness (same search as
/// capacity()). Quantum spaces return the computational basis, Ball spaces
/// the two poles along the last axis.
DistinguishabilityWitness maximal_distinguishable_set(const StateSpace& space,
                                                      const std::vector<Eigen::VectorXd>& candidates,
                                                      int n_max);

/// Max |e_i(w_j) - delta_ij| over the witness.
double witness_error(const DistinguishabilityWitness& witness);

}  // namespace gptkit
