#include "gptkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "gptkit/error.hpp"
#include "gptkit/simd/kernels.hpp"

namespace gptkit::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

LpProblem::LpProblem(Eigen::Index num_vars)
    : objective(Eigen::VectorXd::Zero(num_vars)),
      eq_matrix(0, num_vars),
      eq_rhs(0),
      ineq_matrix(0, num_vars),
      ineq_rhs(0),
      lower(static_cast<std::size_t>(num_vars), 0.0),
      upper(static_cast<std::size_t>(num_vars), kInf) {}

void LpProblem::set_free(Eigen::Index var) {
  lower.at(static_cast<std::size_t>(var)) = -kInf;
  upper.at(static_cast<std::size_t>(var)) = kInf;
}

void LpProblem::set_all_free() {
  for (Eigen::Index j = 0; j < num_vars(); ++j) set_free(j);
}

void LpProblem::add_equality(const Eigen::RowVectorXd& row, double rhs) {
  if (row.size() != num_vars()) fail(ErrorCode::DimensionMismatch, "equality row has wrong length");
  eq_matrix.conservativeResize(eq_matrix.rows() + 1, num_vars());
  eq_matrix.row(eq_matrix.rows() - 1) = row;
  eq_rhs.conservativeResize(eq_rhs.size() + 1);
  eq_rhs(eq_rhs.size() - 1) = rhs;
}

void LpProblem::add_inequality(const Eigen::RowVectorXd& row, double rhs) {
  if (row.size() != num_vars()) {
    fail(ErrorCode::DimensionMismatch, "inequality row has wrong length");
  }
  ineq_matrix.conservativeResize(ineq_matrix.rows() + 1, num_vars());
  ineq_matrix.row(ineq_matrix.rows() - 1) = row;
  ineq_rhs.conservativeResize(ineq_rhs.size() + 1);
  ineq_rhs(ineq_rhs.size() - 1) = rhs;
}

namespace {

void check_dimensions(const LpProblem& p) {
  const Eigen::Index n = p.num_vars();
  auto bad = [](const std::string& what) { fail(ErrorCode::DimensionMismatch, what); };
  if (p.eq_matrix.rows() != p.eq_rhs.size()) bad("equality matrix rows != rhs length");
  if (p.eq_matrix.rows() > 0 && p.eq_matrix.cols() != n) bad("equality matrix columns != variables");
  if (p.ineq_matrix.rows() != p.ineq_rhs.size()) bad("inequality matrix rows != rhs length");
  if (p.ineq_matrix.rows() > 0 && p.ineq_matrix.cols() != n) {
    bad("inequality matrix columns != variables");
  }
  if (!p.lower.empty() && p.lower.size() != static_cast<std::size_t>(n)) bad("lower bounds length");
  if (!p.upper.empty() && p.upper.size() != static_cast<std::size_t>(n)) bad("upper bounds length");
}

// x = offset + sum over entries of coef * y[col]
struct VarMap {
  double offset = 0.0;
  int col_a = -1;
  double coef_a = 0.0;
  int col_b = -1;  // negative part of a split free variable
};

// Standard form: A y == b, y >= 0, maximize c . y (+ constant).
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double constant = 0.0;
  std::vector<VarMap> vars;
  // Column that is a +1 unit vector in exactly this row (or -1 if none).
  std::vector<int> unit_col;
};

StandardForm to_standard_form(const LpProblem& p) {
  const Eigen::Index n = p.num_vars();
  StandardForm sf;
  sf.vars.resize(static_cast<std::size_t>(n));

  int cols = 0;
  std::vector<std::pair<int, double>> bounded;  // (structural column, u - l)
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = p.lower.empty() ? 0.0 : p.lower[static_cast<std::size_t>(j)];
    const double hi = p.upper.empty() ? kInf : p.upper[static_cast<std::size_t>(j)];
    VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      vm.offset = lo;
      vm.col_a = cols++;
      vm.coef_a = 1.0;
      if (std::isfinite(hi)) bounded.emplace_back(vm.col_a, hi - lo);
    } else if (std::isfinite(hi)) {
      vm.offset = hi;
      vm.col_a = cols++;
      vm.coef_a = -1.0;
    } else {
      vm.col_a = cols++;
      vm.coef_a = 1.0;
      vm.col_b = cols++;
    }
  }
  const int structural = cols;
  const Eigen::Index n_eq = p.eq_matrix.rows();
  const Eigen::Index n_ineq = p.ineq_matrix.rows();
  const Eigen::Index n_bound = static_cast<Eigen::Index>(bounded.size());
  const Eigen::Index m = n_eq + n_ineq + n_bound;
  const Eigen::Index total = structural + n_ineq + n_bound;

  sf.a = Eigen::MatrixXd::Zero(m, total);
  sf.b = Eigen::VectorXd::Zero(m);
  sf.c = Eigen::VectorXd::Zero(total);
  sf.unit_col.assign(static_cast<std::size_t>(m), -1);

  Eigen::VectorXd offset(n);
  for (Eigen::Index j = 0; j < n; ++j) offset(j) = sf.vars[static_cast<std::size_t>(j)].offset;

  auto place_row = [&](Eigen::Index row, const Eigen::RowVectorXd& coeffs) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
      sf.a(row, vm.col_a) += vm.coef_a * coeffs(j);
      if (vm.col_b >= 0) sf.a(row, vm.col_b) -= coeffs(j);
    }
  };

  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n_eq; ++i, ++row) {
    place_row(row, p.eq_matrix.row(i));
    sf.b(row) = p.eq_rhs(i) - p.eq_matrix.row(i).dot(offset);
  }
  for (Eigen::Index i = 0; i < n_ineq; ++i, ++row) {
    place_row(row, p.ineq_matrix.row(i));
    sf.a(row, structural + i) = -1.0;  // surplus
    sf.b(row) = p.ineq_rhs(i) - p.ineq_matrix.row(i).dot(offset);
  }
  for (Eigen::Index i = 0; i < n_bound; ++i, ++row) {
    const auto [col, width] = bounded[static_cast<std::size_t>(i)];
    sf.a(row, col) = 1.0;
    sf.a(row, structural + n_ineq + i) = 1.0;  // slack
    sf.b(row) = width;
  }

  for (Eigen::Index r = 0; r < m; ++r) {
    if (sf.b(r) < 0.0) {
      sf.a.row(r) *= -1.0;
      sf.b(r) = -sf.b(r);
    }
  }
  // Slack columns that ended up as +1 can seed the initial basis.
  for (Eigen::Index s = structural; s < total; ++s) {
    Eigen::Index hit = -1;
    int nonzeros = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (sf.a(r, s) != 0.0) {
        ++nonzeros;
        hit = r;
      }
    }
    if (nonzeros == 1 && sf.a(hit, s) == 1.0 && sf.unit_col[static_cast<std::size_t>(hit)] < 0) {
      sf.unit_col[static_cast<std::size_t>(hit)] = static_cast<int>(s);
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    const VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
    sf.c(vm.col_a) += vm.coef_a * p.objective(j);
    if (vm.col_b >= 0) sf.c(vm.col_b) -= p.objective(j);
    sf.constant += p.objective(j) * vm.offset;
  }
  return sf;
}

// Row-major tableau with the objective row last and the rhs in the last column.
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols)
      : rows_(rows), cols_(cols), stride_(cols + 1),
        data_(static_cast<std::size_t>((rows + 1) * (cols + 1)), 0.0) {}

  double& at(Eigen::Index r, Eigen::Index c) { return data_[index(r, c)]; }
  double at(Eigen::Index r, Eigen::Index c) const { return data_[index(r, c)]; }
  double& rhs(Eigen::Index r) { return at(r, cols_); }
  double rhs(Eigen::Index r) const { return at(r, cols_); }
  Eigen::Index obj_row() const { return rows_; }

  std::span<double> row(Eigen::Index r) {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(stride_)};
  }

  void pivot(Eigen::Index pr, Eigen::Index pc) {
    std::span<double> prow = row(pr);
    const double inv = 1.0 / at(pr, pc);
    simd::scale(inv, prow);
    at(pr, pc) = 1.0;
    for (Eigen::Index r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      simd::axpy(-f, prow, row(r));
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t index(Eigen::Index r, Eigen::Index c) const {
    return static_cast<std::size_t>(r * stride_ + c);
  }

  Eigen::Index rows_;
  Eigen::Index cols_;
  Eigen::Index stride_;
  std::vector<double> data_;
};

class Simplex {
 public:
  Simplex(const StandardForm& sf, std::size_t pivot_limit)
      : sf_(sf), m_(sf.a.rows()), n_(sf.a.cols()), limit_(pivot_limit) {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (sf.unit_col[static_cast<std::size_t>(r)] < 0) ++num_art_;
    }
    width_ = n_ + num_art_;
    tab_ = Tableau(m_, width_);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    full_ = Eigen::MatrixXd::Zero(m_, width_);
    full_.leftCols(n_) = sf.a;
    cost_ = Eigen::VectorXd::Zero(width_);
    Eigen::Index next_art = n_;
    for (Eigen::Index r = 0; r < m_; ++r) {
      for (Eigen::Index c = 0; c < n_; ++c) tab_.at(r, c) = sf.a(r, c);
      tab_.rhs(r) = sf.b(r);
      Eigen::Index basic = sf.unit_col[static_cast<std::size_t>(r)];
      if (basic < 0) {
        basic = next_art++;
        tab_.at(r, basic) = 1.0;
        full_(r, basic) = 1.0;
      }
      basis_[static_cast<std::size_t>(r)] = basic;
    }
  }

  LpResult run() {
    LpResult result;
    if (num_art_ > 0 && !phase_one(result)) return finish(result);
    phase_two(result);
    return finish(result);
  }

 private:
  bool is_artificial(Eigen::Index col) const { return col >= n_; }

  void count_pivot() {
    if (++pivots_ > limit_) {
      fail(ErrorCode::NumericalFailure,
           "simplex exceeded the pivot limit of " + std::to_string(limit_));
    }
  }

  // Bland: lowest-index column with negative reduced cost.
  Eigen::Index entering(bool allow_artificial) const {
    const Eigen::Index limit = allow_artificial ? width_ : n_;
    for (Eigen::Index c = 0; c < limit; ++c) {
      if (tab_.at(tab_.obj_row(), c) < -kTolerance) return c;
    }
    return -1;
  }

  // Harris two-pass ratio test: the largest step allowed when every basic
  // variable may dip kTolerance below zero, then the largest pivot among rows
  // that block before it. Ties go to the lowest basic-variable index.
  Eigen::Index leaving(Eigen::Index col) const {
    double bound = kInf;
    for (Eigen::Index r = 0; r < m_; ++r) {
      const double a = tab_.at(r, col);
      if (a > kTolerance) bound = std::min(bound, (std::max(tab_.rhs(r), 0.0) + kTolerance) / a);
    }
    Eigen::Index best = -1;
    double best_pivot = 0.0;
    for (Eigen::Index r = 0; r < m_; ++r) {
      const double a = tab_.at(r, col);
      if (a <= kTolerance || std::max(tab_.rhs(r), 0.0) / a > bound) continue;
      if (best < 0 || a > best_pivot * (1.0 + 1e-12) ||
          (a >= best_pivot * (1.0 - 1e-12) &&
           basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(best)])) {
        best = r;
        best_pivot = a;
      }
    }
    return best;
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    count_pivot();
    tab_.pivot(r, c);
    basis_[static_cast<std::size_t>(r)] = c;
    fresh_ = false;
    clamp_rhs();
  }

  // Clamp round-off so the rhs stays primal feasible.
  void clamp_rhs() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (tab_.rhs(i) < 0.0 && tab_.rhs(i) > -kTolerance) tab_.rhs(i) = 0.0;
    }
  }

  // Duals of the current basis for the current cost vector, from the
  // original columns.
  Eigen::VectorXd duals(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) const {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index r = 0; r < m_; ++r) cb(r) = cost_(basis_[static_cast<std::size_t>(r)]);
    return lu.transpose().solve(cb);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> factor_basis() const {
    Eigen::MatrixXd b(m_, m_);
    for (Eigen::Index r = 0; r < m_; ++r) b.col(r) = full_.col(basis_[static_cast<std::size_t>(r)]);
    return Eigen::PartialPivLU<Eigen::MatrixXd>(b);
  }

  // Rebuild the whole tableau as B^-1 [A | b] so pivoting error does not
  // accumulate.
  void refactor() {
    if (m_ == 0) return;
    const auto lu = factor_basis();
    if (lu.rcond() < 1e-13) return;  // nearly singular in floating point; keep the tableau
    const Eigen::MatrixXd body = lu.solve(full_);
    const Eigen::VectorXd rhs = lu.solve(sf_.b);
    if (!body.allFinite() || !rhs.allFinite()) return;
    for (Eigen::Index r = 0; r < m_; ++r) {
      for (Eigen::Index c = 0; c < width_; ++c) tab_.at(r, c) = body(r, c);
      tab_.rhs(r) = rhs(r);
    }
    const Eigen::VectorXd y = duals(lu);
    const Eigen::Index obj = tab_.obj_row();
    for (Eigen::Index c = 0; c < width_; ++c) tab_.at(obj, c) = full_.col(c).dot(y) - cost_(c);
    tab_.rhs(obj) = sf_.b.dot(y);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      for (Eigen::Index i = 0; i < m_; ++i) tab_.at(i, b) = i == r ? 1.0 : 0.0;
      tab_.at(obj, b) = 0.0;
    }
    if (!allow_artificial_) {
      for (Eigen::Index c = n_; c < width_; ++c) tab_.at(obj, c) = 0.0;
    }
    fresh_ = true;
  }

  // Before trusting a suspicious terminal condition make sure the tableau is
  // freshly factored; returns true if it was not, so the caller re-checks.
  bool settle() {
    if (fresh_) return false;
    refactor();
    clamp_rhs();
    return fresh_;
  }

  // Returns false if the problem is infeasible.
  bool phase_one(LpResult& result) {
    // maximize -sum(artificials): reduced costs = -sum of rows with an
    // artificial basic variable, +1 on the artificial columns themselves.
    const Eigen::Index obj = tab_.obj_row();
    std::span<double> orow = tab_.row(obj);
    std::fill(orow.begin(), orow.end(), 0.0);
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (is_artificial(basis_[static_cast<std::size_t>(r)])) simd::axpy(-1.0, tab_.row(r), orow);
    }
    for (Eigen::Index c = n_; c < width_; ++c) tab_.at(obj, c) = 0.0;
    cost_.setZero();
    cost_.tail(width_ - n_).setConstant(-1.0);
    allow_artificial_ = true;
    fresh_ = true;

    for (;;) {
      const Eigen::Index c = entering(true);
      if (c < 0) {
        if (!infeasible() || certify_infeasible(result)) break;
        // the certificate failed: clean up the tableau and keep going
        if (settle()) continue;
        fail(ErrorCode::NumericalFailure, "infeasibility certificate failed verification");
      }
      const Eigen::Index r = leaving(c);
      if (r < 0) {
        if (settle()) continue;
        fail(ErrorCode::NumericalFailure, "phase one is unbounded");
      }
      pivot(r, c);
    }

    if (infeasible()) {
      result.status = Status::Infeasible;
      return false;
    }

    // Drive artificials out of the basis; rows where that is impossible are
    // redundant and stay inert (zero on all structural columns).
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[static_cast<std::size_t>(r)])) continue;
      for (Eigen::Index c = 0; c < n_; ++c) {
        if (std::fabs(tab_.at(r, c)) > kTolerance) {
          pivot(r, c);
          break;
        }
      }
    }
    allow_artificial_ = false;
    return true;
  }

  bool infeasible() const {
    const double scale = std::max(1.0, sf_.b.size() ? sf_.b.cwiseAbs().maxCoeff() : 0.0);
    return -tab_.rhs(tab_.obj_row()) > kTolerance * scale;
  }

  // Returns false if the Farkas vector from the current basis does not verify.
  bool certify_infeasible(LpResult& result) {
    // y = -(phase-one duals) is a Farkas vector: y^T A <= 0 and y^T b > 0.
    Eigen::VectorXd y = -duals(factor_basis());
    const double norm = y.cwiseAbs().maxCoeff();
    if (norm == 0.0) return false;
    y /= norm;
    const double residual = m_ > 0 ? (y.transpose() * sf_.a).maxCoeff() : 0.0;
    const double gap = y.dot(sf_.b);
    result.certificate_residual = residual;
    return gap > 0.0 && residual <= kCertificateTolerance;
  }

  void phase_two(LpResult& result) {
    const Eigen::Index obj = tab_.obj_row();
    std::span<double> orow = tab_.row(obj);
    std::fill(orow.begin(), orow.end(), 0.0);
    for (Eigen::Index c = 0; c < n_; ++c) tab_.at(obj, c) = -sf_.c(c);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      if (is_artificial(b)) continue;
      const double cb = sf_.c(b);
      if (cb != 0.0) simd::axpy(cb, tab_.row(r), orow);
    }
    for (Eigen::Index c = n_; c < width_; ++c) tab_.at(obj, c) = 0.0;
    cost_.setZero();
    cost_.head(n_) = sf_.c;

    for (;;) {
      const Eigen::Index c = entering(false);
      if (c < 0) break;
      const Eigen::Index r = leaving(c);
      if (r < 0) {
        if (settle()) continue;
        result.status = Status::Unbounded;
        return;
      }
      pivot(r, c);
    }
    result.status = Status::Optimal;
  }

  LpResult finish(LpResult& result) {
    result.pivots = pivots_;
    if (result.status != Status::Optimal) return result;

    // Recompute the basic solution from the original columns for accuracy.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    std::vector<Eigen::Index> rows;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      if (is_artificial(b)) continue;
      rows.push_back(r);
      cols.push_back(b);
    }
    Eigen::VectorXd tableau_values(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      tableau_values(static_cast<Eigen::Index>(k)) = tab_.rhs(rows[k]);
    }
    if (!cols.empty()) {
      Eigen::MatrixXd basis(m_, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) {
        basis.col(static_cast<Eigen::Index>(k)) = sf_.a.col(cols[k]);
      }
      Eigen::VectorXd refined = basis.colPivHouseholderQr().solve(sf_.b);
      const double drift = (refined - tableau_values).cwiseAbs().maxCoeff();
      if (!refined.allFinite() || drift > 1e-6 * std::max(1.0, tableau_values.cwiseAbs().maxCoeff())) {
        refined = tableau_values;
      }
      for (std::size_t k = 0; k < cols.size(); ++k) {
        y(cols[k]) = std::max(0.0, refined(static_cast<Eigen::Index>(k)));
      }
    }
    result.solution = recover(y);
    return result;
  }

  Eigen::VectorXd recover(const Eigen::VectorXd& y) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(sf_.vars.size()));
    for (std::size_t j = 0; j < sf_.vars.size(); ++j) {
      const VarMap& vm = sf_.vars[j];
      double v = vm.offset + vm.coef_a * y(vm.col_a);
      if (vm.col_b >= 0) v -= y(vm.col_b);
      x(static_cast<Eigen::Index>(j)) = v;
    }
    return x;
  }

  const StandardForm& sf_;
  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::Index num_art_ = 0;
  Eigen::Index width_ = 0;
  std::size_t limit_;
  std::size_t pivots_ = 0;
  Tableau tab_{0, 0};
  std::vector<Eigen::Index> basis_;
  Eigen::MatrixXd full_;  // [A | artificial columns]
  Eigen::VectorXd cost_;  // cost of the current phase, per column
  bool allow_artificial_ = false;
  bool fresh_ = true;
};

}  // namespace

double max_violation(const LpProblem& p, const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (p.eq_matrix.rows() > 0) {
    worst = std::max(worst, (p.eq_matrix * x - p.eq_rhs).cwiseAbs().maxCoeff());
  }
  if (p.ineq_matrix.rows() > 0) {
    worst = std::max(worst, (p.ineq_rhs - p.ineq_matrix * x).maxCoeff());
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double lo = p.lower.empty() ? 0.0 : p.lower[k];
    const double hi = p.upper.empty() ? kInf : p.upper[k];
    worst = std::max({worst, lo - x(j), x(j) - hi});
  }
  return worst;
}

LpResult solve(const LpProblem& problem, std::size_t pivot_limit) {
  check_dimensions(problem);
  for (Eigen::Index j = 0; j < problem.num_vars(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    if (!problem.lower.empty() && !problem.upper.empty() && problem.lower[k] > problem.upper[k]) {
      return LpResult{};
    }
  }

  const StandardForm sf = to_standard_form(problem);
  Simplex simplex(sf, pivot_limit);
  LpResult result = simplex.run();
  if (result.status == Status::Optimal) {
    const Eigen::VectorXd& x = *result.solution;
    double rhs_scale = 1.0;
    if (problem.eq_rhs.size()) rhs_scale = std::max(rhs_scale, problem.eq_rhs.cwiseAbs().maxCoeff());
    if (problem.ineq_rhs.size()) {
      rhs_scale = std::max(rhs_scale, problem.ineq_rhs.cwiseAbs().maxCoeff());
    }
    if (max_violation(problem, x) > kTolerance * rhs_scale) {
      fail(ErrorCode::NumericalFailure, "optimal point violates constraints beyond tolerance");
    }
    result.objective_value = problem.objective.dot(x);
  } else {
    result.solution.reset();
  }
  return result;
}

}  // namespace gptkit::lp
