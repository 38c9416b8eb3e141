#include "gptkit/distinguishability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"
#include "gptkit/lp.hpp"

namespace gptkit {

using lp::kTolerance;

namespace {

void require_states(const StateSpace& space, const std::vector<Eigen::VectorXd>& states) {
  for (const auto& s : states) {
    if (s.size() != space.ambient_dim()) {
      fail(ErrorCode::DimensionMismatch, "state has the wrong ambient dimension");
    }
    if (!contains_state(space, s)) fail(ErrorCode::NotAState, "input is not a state of the space");
  }
}

std::optional<DistinguishabilityWitness> finalize(const StateSpace& space,
                                                  std::vector<Effect> effects,
                                                  const std::vector<Eigen::VectorXd>& states) {
  DistinguishabilityWitness w{Measurement::create(space, std::move(effects)), states};
  if (witness_error(w) > kWitnessTolerance) {
    fail(ErrorCode::NumericalFailure, "distinguishing measurement misses delta_ij");
  }
  return w;
}

std::optional<DistinguishabilityWitness> polytopic(const StateSpace& space,
                                                   const std::vector<Eigen::VectorXd>& states) {
  const Eigen::Index k = space.ambient_dim();
  const auto n = static_cast<Eigen::Index>(states.size());
  lp::LpProblem p(n * k);
  p.set_all_free();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index v = 0; v < space.num_vertices(); ++v) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n * k);
      row.segment(i * k, k) = space.vertices().col(v).transpose();
      p.add_inequality(row, 0.0);
    }
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n * k);
    for (Eigen::Index i = 0; i < n; ++i) row(i * k + c) = 1.0;
    p.add_equality(row, space.unit()(c));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n * k);
      row.segment(i * k, k) = states[static_cast<std::size_t>(j)].transpose();
      p.add_equality(row, i == j ? 1.0 : 0.0);
    }
  }
  const lp::LpResult r = lp::solve(p);
  if (!r.optimal()) return std::nullopt;
  std::vector<Effect> effects;
  for (Eigen::Index i = 0; i < n; ++i) effects.push_back({r.solution->segment(i * k, k)});
  return finalize(space, std::move(effects), states);
}

std::optional<DistinguishabilityWitness> quantum(const StateSpace& space,
                                                 const std::vector<Eigen::VectorXd>& states) {
  const int dim = space.hilbert_dim();
  const std::size_t n = states.size();
  // For positive operators tr(rho_i rho_j) = 0 iff the supports are orthogonal.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (states[i].dot(states[j]) > kTolerance) return std::nullopt;
    }
  }
  std::vector<CMatrix> projectors;
  CMatrix remainder = CMatrix::Identity(dim, dim);
  for (const auto& s : states) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_from_coordinates(s, dim));
    CMatrix proj = CMatrix::Zero(dim, dim);
    for (int c = 0; c < dim; ++c) {
      if (eig.eigenvalues()(c) > kTolerance) {
        proj += eig.eigenvectors().col(c) * eig.eigenvectors().col(c).adjoint();
      }
    }
    remainder -= proj;
    projectors.push_back(std::move(proj));
  }
  projectors.back() += remainder;
  std::vector<Effect> effects;
  for (const auto& proj : projectors) effects.push_back({hermitian_coordinates(proj)});
  return finalize(space, std::move(effects), states);
}

std::optional<DistinguishabilityWitness> ball(const StateSpace& space,
                                              const std::vector<Eigen::VectorXd>& states) {
  const Eigen::Index d = space.ball_dim();
  if (states.size() == 1) return finalize(space, {Effect{space.unit()}}, states);
  if (states.size() > 2) return std::nullopt;
  const Eigen::VectorXd r0 = states[0].tail(d);
  const Eigen::VectorXd r1 = states[1].tail(d);
  if (std::fabs(r0.norm() - 1.0) > kTolerance || (r0 + r1).cwiseAbs().maxCoeff() > kTolerance) {
    return std::nullopt;
  }
  Eigen::VectorXd e0(d + 1);
  e0 << 0.5, 0.5 * r0;
  Eigen::VectorXd e1(d + 1);
  e1 << 0.5, -0.5 * r0;
  return finalize(space, {Effect{e0}, Effect{e1}}, states);
}

double binomial(std::size_t m, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(m - i) / static_cast<double>(i + 1);
  return c;
}

// Lexicographic k-combinations of {0..m-1}; returns the first distinguishable one.
std::optional<DistinguishabilityWitness> search_size(const StateSpace& space,
                                                     const std::vector<Eigen::VectorXd>& cand,
                                                     std::size_t k) {
  const std::size_t m = cand.size();
  if (binomial(m, k) > static_cast<double>(kMaxSubsetEnumeration)) {
    fail(ErrorCode::ScaleLimit, "capacity search would enumerate more than 10^6 subsets of size " +
                                    std::to_string(k));
  }
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<Eigen::VectorXd> subset;
    subset.reserve(k);
    for (std::size_t i : idx) subset.push_back(cand[i]);
    if (auto w = perfectly_distinguishable(space, subset)) return w;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) return std::nullopt;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

double witness_error(const DistinguishabilityWitness& witness) {
  double worst = 0.0;
  for (std::size_t i = 0; i < witness.measurement.size(); ++i) {
    for (std::size_t j = 0; j < witness.states.size(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(witness.measurement[i](witness.states[j]) - expected));
    }
  }
  return worst;
}

std::optional<DistinguishabilityWitness> perfectly_distinguishable(
    const StateSpace& space, const std::vector<Eigen::VectorXd>& states) {
  if (states.empty()) fail(ErrorCode::InvalidArgument, "need at least one state");
  require_states(space, states);
  switch (space.kind()) {
    case SpaceKind::Polytopic:
      return polytopic(space, states);
    case SpaceKind::Quantum:
      return quantum(space, states);
    case SpaceKind::Ball:
      return ball(space, states);
  }
  return std::nullopt;
}

DistinguishabilityWitness maximal_distinguishable_set(const StateSpace& space,
                                                      const std::vector<Eigen::VectorXd>& candidates,
                                                      int n_max) {
  if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be at least 1");
  switch (space.kind()) {
    case SpaceKind::Quantum: {
      const int n = std::min(space.hilbert_dim(), n_max);
      std::vector<Eigen::VectorXd> basis;
      for (int i = 0; i < n; ++i) {
        CMatrix rho = CMatrix::Zero(space.hilbert_dim(), space.hilbert_dim());
        rho(i, i) = 1.0;
        basis.push_back(hermitian_coordinates(rho));
      }
      return *perfectly_distinguishable(space, basis);
    }
    case SpaceKind::Ball: {
      const Eigen::Index d = space.ball_dim();
      Eigen::VectorXd north = Eigen::VectorXd::Unit(d + 1, 0);
      north(d) = 1.0;
      std::vector<Eigen::VectorXd> poles{north};
      if (n_max >= 2) {
        Eigen::VectorXd south = north;
        south(d) = -1.0;
        poles.push_back(south);
      }
      return *perfectly_distinguishable(space, poles);
    }
    case SpaceKind::Polytopic:
      break;
  }
  std::vector<Eigen::VectorXd> cand = candidates;
  if (cand.empty()) {
    for (Eigen::Index i = 0; i < space.num_vertices(); ++i) cand.push_back(space.vertex(i));
  }
  require_states(space, cand);
  const std::size_t top = std::min(cand.size(), static_cast<std::size_t>(n_max));
  for (std::size_t k = top; k >= 1; --k) {
    if (auto w = search_size(space, cand, k)) return *w;
  }
  fail(ErrorCode::NumericalFailure, "no single state was distinguishable");
}

int capacity(const StateSpace& space, const std::vector<Eigen::VectorXd>& candidates, int n_max) {
  if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be at least 1");
  switch (space.kind()) {
    case SpaceKind::Quantum:
      return std::min(space.hilbert_dim(), n_max);
    case SpaceKind::Ball:
      return std::min(2, n_max);
    case SpaceKind::Polytopic:
      break;
  }
  return static_cast<int>(maximal_distinguishable_set(space, candidates, n_max).states.size());
}

}  // namespace gptkit
