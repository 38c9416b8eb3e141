#pragma once

// Sorkin interference terms for two- and three-slit arrangements. Slits are
// labelled 1..M and correspond to the standard basis vectors.

#include <array>
#include <vector>

#include "gptkit/hermitian.hpp"

namespace gptkit::interference {

inline constexpr double kStateTolerance = 1e-9;
inline constexpr double kKrausTolerance = 1e-9;

class SlitExperiment {
 public:
  /// Throws InvalidArgument unless M is 2 or 3, rho is an M x M density
  /// matrix and 0 <= Q <= 1, all within 1e-9.
  static SlitExperiment create(CMatrix rho, CMatrix detector);

  int slits() const { return static_cast<int>(rho_.rows()); }
  const CMatrix& rho() const { return rho_; }
  const CMatrix& detector() const { return q_; }

 private:
  SlitExperiment(CMatrix rho, CMatrix q) : rho_(std::move(rho)), q_(std::move(q)) {}
  CMatrix rho_;
  CMatrix q_;
};

/// Sum of |i><i| over the 1-based slit labels in `open_slits`.
CMatrix slit_projector(int m, const std::vector<int>& open_slits);

/// tr(P_I rho P_I Q). Throws EmptySubset for I = {} and InvalidArgument for
/// labels outside 1..M or repeated labels.
double click_probability(const SlitExperiment& exp, const std::vector<int>& open_slits);

/// P12 - P1 - P2. Throws WrongSlitCount unless M = 2.
double sorkin_i2(const SlitExperiment& exp);
/// P123 - P12 - P13 - P23 + P1 + P2 + P3. Throws WrongSlitCount unless M = 3.
double sorkin_i3(const SlitExperiment& exp);

/// rho123 - rho12 - rho13 - rho23 + rho1 + rho2 + rho3 with rho_I = P_I rho P_I.
CMatrix decomposition_residual(const CMatrix& rho);

/// Completely positive, trace non-increasing map rho -> sum_k K_k rho K_k^dagger.
class BlockingMap {
 public:
  /// Throws InvalidKraus for an empty list, mismatched shapes or
  /// sum_k K_k^dagger K_k not below the identity within 1e-9.
  static BlockingMap create(std::vector<CMatrix> kraus);
  static BlockingMap projector(int m, const std::vector<int>& open_slits);

  int dim() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  CMatrix apply(const CMatrix& rho) const;

 private:
  explicit BlockingMap(std::vector<CMatrix> kraus) : kraus_(std::move(kraus)) {}
  std::vector<CMatrix> kraus_;
};

/// Subsets in blocker order: {1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}.
const std::array<std::vector<int>, 7>& blocker_subsets();

using BlockerSet = std::array<BlockingMap, 7>;

/// Signed I3 sum with P_I = tr(B_I(rho) Q). Throws WrongSlitCount unless rho
/// and Q are 3 x 3, InvalidKraus for a blocker on another dimension.
double sorkin_i3_with_blockers(const CMatrix& rho, const BlockerSet& blockers, const CMatrix& detector);

/// The ideal blockers P_I . P_I.
BlockerSet orthogonal_blockers();

/// Blockers of {1} and {2} project onto R|1> and R|2>, where R rotates by
/// `angle` in the plane spanned by |1> and |2>. All other blockers are ideal.
BlockerSet rotated_blockers(double angle);

/// rho -> P_I D_p(rho) P_I with D_p(rho) = (1 - p) rho + p tr(rho) 1/3, the
/// same p for every subset. This leaves I3 = 0 because the depolarized state
/// is still decomposed by ideal projectors.
BlockerSet depolarizing_blockers(double p);

/// As depolarizing_blockers but with strength p (3 - |I|) / 2, so single
/// slits see p, pairs p/2 and the fully open arrangement none.
BlockerSet graded_depolarizing_blockers(double p);

}  // namespace gptkit::interference
