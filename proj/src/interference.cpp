#include "gptkit/interference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gptkit/error.hpp"

namespace gptkit::interference {

namespace {

void check_density(const CMatrix& rho, const char* what) {
  if (rho.rows() != rho.cols()) fail(ErrorCode::InvalidArgument, std::string(what) + " must be square");
  if (!is_hermitian(rho, kStateTolerance)) fail(ErrorCode::InvalidArgument, std::string(what) + " is not Hermitian");
  if (std::fabs(rho.trace().real() - 1.0) > kStateTolerance) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " does not have unit trace");
  }
  if (hermitian_eigenvalues(rho)(0) < -kStateTolerance) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " is not positive semidefinite");
  }
}

void check_effect(const CMatrix& q) {
  if (!is_hermitian(q, kStateTolerance)) fail(ErrorCode::InvalidArgument, "detector effect is not Hermitian");
  const Eigen::VectorXd ev = hermitian_eigenvalues(q);
  if (ev(0) < -kStateTolerance || ev(ev.size() - 1) > 1.0 + kStateTolerance) {
    fail(ErrorCode::InvalidArgument, "detector effect must satisfy 0 <= Q <= 1");
  }
}

double signed_i3(const std::array<double, 7>& p) {
  // order {1},{2},{3},{12},{13},{23},{123}
  return p[6] - p[3] - p[4] - p[5] + p[0] + p[1] + p[2];
}

BlockingMap depolarize_then_project(const std::vector<int>& subset, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "depolarizing strength must lie in [0, 1]");
  const CMatrix proj = slit_projector(3, subset);
  std::vector<CMatrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * proj);
  // D_p(rho) = (1-p) rho + (p/3) sum_ij |i><j| rho |j><i|
  const double w = std::sqrt(p / 3.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CMatrix k = CMatrix::Zero(3, 3);
      k(i, j) = w;
      kraus.push_back(proj * k);
    }
  }
  return BlockingMap::create(std::move(kraus));
}

}  // namespace

SlitExperiment SlitExperiment::create(CMatrix rho, CMatrix detector) {
  if (rho.rows() != 2 && rho.rows() != 3) fail(ErrorCode::InvalidArgument, "slit experiments have 2 or 3 slits");
  check_density(rho, "rho");
  if (detector.rows() != rho.rows() || detector.cols() != rho.cols()) {
    fail(ErrorCode::DimensionMismatch, "detector effect and rho must have the same size");
  }
  check_effect(detector);
  return SlitExperiment(std::move(rho), std::move(detector));
}

CMatrix slit_projector(int m, const std::vector<int>& open_slits) {
  if (open_slits.empty()) fail(ErrorCode::EmptySubset, "at least one slit must be open");
  CMatrix p = CMatrix::Zero(m, m);
  for (int s : open_slits) {
    if (s < 1 || s > m) fail(ErrorCode::InvalidArgument, "slit label " + std::to_string(s) + " out of range");
    if (p(s - 1, s - 1) != 0.0) fail(ErrorCode::InvalidArgument, "slit label repeated");
    p(s - 1, s - 1) = 1.0;
  }
  return p;
}

double click_probability(const SlitExperiment& exp, const std::vector<int>& open_slits) {
  const CMatrix p = slit_projector(exp.slits(), open_slits);
  return (p * exp.rho() * p * exp.detector()).trace().real();
}

double sorkin_i2(const SlitExperiment& exp) {
  if (exp.slits() != 2) fail(ErrorCode::WrongSlitCount, "I2 needs a two-slit experiment");
  return click_probability(exp, {1, 2}) - click_probability(exp, {1}) - click_probability(exp, {2});
}

double sorkin_i3(const SlitExperiment& exp) {
  if (exp.slits() != 3) fail(ErrorCode::WrongSlitCount, "I3 needs a three-slit experiment");
  std::array<double, 7> p{};
  for (std::size_t k = 0; k < 7; ++k) p[k] = click_probability(exp, blocker_subsets()[k]);
  return signed_i3(p);
}

CMatrix decomposition_residual(const CMatrix& rho) {
  if (rho.rows() != 3 || rho.cols() != 3) fail(ErrorCode::WrongSlitCount, "decomposition needs a 3x3 matrix");
  const double sign[7] = {1, 1, 1, -1, -1, -1, 1};
  CMatrix out = CMatrix::Zero(3, 3);
  for (std::size_t k = 0; k < 7; ++k) {
    const CMatrix p = slit_projector(3, blocker_subsets()[k]);
    out += sign[k] * (p * rho * p);
  }
  return out;
}

BlockingMap BlockingMap::create(std::vector<CMatrix> kraus) {
  if (kraus.empty()) fail(ErrorCode::InvalidKraus, "a blocking map needs at least one Kraus operator");
  const auto n = kraus.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const CMatrix& k : kraus) {
    if (k.rows() != n || k.cols() != n) fail(ErrorCode::InvalidKraus, "Kraus operators must be square and equal-sized");
    if (!k.allFinite()) fail(ErrorCode::InvalidKraus, "Kraus operator has non-finite entries");
    sum += k.adjoint() * k;
  }
  if (hermitian_eigenvalues(sum)(n - 1) > 1.0 + kKrausTolerance) {
    fail(ErrorCode::InvalidKraus, "sum of K^dagger K exceeds the identity");
  }
  return BlockingMap(std::move(kraus));
}

BlockingMap BlockingMap::projector(int m, const std::vector<int>& open_slits) {
  return create({slit_projector(m, open_slits)});
}

CMatrix BlockingMap::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const CMatrix& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

const std::array<std::vector<int>, 7>& blocker_subsets() {
  static const std::array<std::vector<int>, 7> subsets{
      {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}}};
  return subsets;
}

double sorkin_i3_with_blockers(const CMatrix& rho, const BlockerSet& blockers, const CMatrix& detector) {
  if (rho.rows() != 3 || detector.rows() != 3) fail(ErrorCode::WrongSlitCount, "I3 needs a three-slit experiment");
  check_density(rho, "rho");
  check_effect(detector);
  std::array<double, 7> p{};
  for (std::size_t k = 0; k < 7; ++k) {
    if (blockers[k].dim() != 3) fail(ErrorCode::InvalidKraus, "blockers must act on a three-slit system");
    p[k] = (blockers[k].apply(rho) * detector).trace().real();
  }
  return signed_i3(p);
}

BlockerSet orthogonal_blockers() {
  const auto& s = blocker_subsets();
  return {BlockingMap::projector(3, s[0]), BlockingMap::projector(3, s[1]), BlockingMap::projector(3, s[2]),
          BlockingMap::projector(3, s[3]), BlockingMap::projector(3, s[4]), BlockingMap::projector(3, s[5]),
          BlockingMap::projector(3, s[6])};
}

BlockerSet rotated_blockers(double angle) {
  CMatrix r = CMatrix::Identity(3, 3);
  r(0, 0) = std::cos(angle);
  r(1, 0) = std::sin(angle);
  r(0, 1) = -std::sin(angle);
  r(1, 1) = std::cos(angle);
  BlockerSet out = orthogonal_blockers();
  for (std::size_t k = 0; k < 2; ++k) {
    const CMatrix p = slit_projector(3, blocker_subsets()[k]);
    out[k] = BlockingMap::create({r * p * r.adjoint()});
  }
  return out;
}

BlockerSet depolarizing_blockers(double p) {
  const auto& s = blocker_subsets();
  return {depolarize_then_project(s[0], p), depolarize_then_project(s[1], p), depolarize_then_project(s[2], p),
          depolarize_then_project(s[3], p), depolarize_then_project(s[4], p), depolarize_then_project(s[5], p),
          depolarize_then_project(s[6], p)};
}

BlockerSet graded_depolarizing_blockers(double p) {
  const auto& s = blocker_subsets();
  auto strength = [p](const std::vector<int>& subset) {
    return p * (3.0 - static_cast<double>(subset.size())) / 2.0;
  };
  return {depolarize_then_project(s[0], strength(s[0])), depolarize_then_project(s[1], strength(s[1])),
          depolarize_then_project(s[2], strength(s[2])), depolarize_then_project(s[3], strength(s[3])),
          depolarize_then_project(s[4], strength(s[4])), depolarize_then_project(s[5], strength(s[5])),
          depolarize_then_project(s[6], strength(s[6]))};
}

}  // namespace gptkit::interference
