#include "gptkit/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "gptkit/error.hpp"
#include "gptkit/lp.hpp"
#include "gptkit/simd/kernels.hpp"

namespace gptkit::polyhedral {

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  Bitset operator&(const Bitset& o) const {
    Bitset r = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] &= o.words_[w];
    return r;
  }

  bool contains(const Bitset& sub) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((sub.words_[w] & ~words_[w]) != 0) return false;
    }
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  Eigen::VectorXd v;
  Bitset zeros;  // indices of processed constraints that are tight on v
};

void normalize(Eigen::VectorXd& v) {
  const double m = simd::max_abs({v.data(), static_cast<std::size_t>(v.size())});
  if (m > 0.0) simd::scale(1.0 / m, {v.data(), static_cast<std::size_t>(v.size())});
}

double eval(const Eigen::VectorXd& row, const Eigen::VectorXd& v) {
  return simd::dot({row.data(), static_cast<std::size_t>(row.size())},
                   {v.data(), static_cast<std::size_t>(v.size())});
}

}  // namespace

std::vector<Eigen::VectorXd> extreme_rays(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  if (k == 0) return {};

  // Greedily pick k linearly independent rows to seed the cone.
  std::vector<Eigen::Index> seed_rows;
  Eigen::MatrixXd seed(0, k);
  for (Eigen::Index r = 0; r < m && static_cast<Eigen::Index>(seed_rows.size()) < k; ++r) {
    Eigen::MatrixXd trial(seed.rows() + 1, k);
    trial << seed, a.row(r);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.rows()) {
      seed = std::move(trial);
      seed_rows.push_back(r);
    }
  }
  if (static_cast<Eigen::Index>(seed_rows.size()) < k) {
    fail(ErrorCode::InvalidArgument, "cone constraints do not have full column rank");
  }

  std::vector<Eigen::Index> order = seed_rows;
  std::vector<bool> is_seed(static_cast<std::size_t>(m), false);
  for (Eigen::Index r : seed_rows) is_seed[static_cast<std::size_t>(r)] = true;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (!is_seed[static_cast<std::size_t>(r)]) order.push_back(r);
  }

  // S x >= 0 has extreme rays = columns of S^{-1}; ray i is tight on all seed rows but i.
  const Eigen::MatrixXd inv = seed.inverse();
  const auto nbits = static_cast<std::size_t>(m);
  std::vector<Ray> rays;
  for (Eigen::Index i = 0; i < k; ++i) {
    Ray ray{inv.col(i), Bitset(nbits)};
    normalize(ray.v);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j != i) ray.zeros.set(static_cast<std::size_t>(seed_rows[static_cast<std::size_t>(j)]));
    }
    rays.push_back(std::move(ray));
  }

  for (std::size_t step = static_cast<std::size_t>(k); step < order.size(); ++step) {
    const Eigen::Index r = order[step];
    const Eigen::VectorXd row = a.row(r).transpose();
    const double tol = lp::kTolerance * std::max(1.0, row.cwiseAbs().maxCoeff());

    std::vector<double> value(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      value[i] = eval(row, rays[i].v);
      if (value[i] > tol) {
        pos.push_back(i);
      } else if (value[i] < -tol) {
        neg.push_back(i);
      } else {
        zero.push_back(i);
      }
    }
    if (neg.empty()) {
      for (std::size_t i : zero) rays[i].zeros.set(static_cast<std::size_t>(r));
      continue;
    }

    std::vector<Ray> next;
    next.reserve(pos.size() + zero.size() + pos.size() * neg.size());
    for (std::size_t i : pos) next.push_back(rays[i]);
    for (std::size_t i : zero) {
      next.push_back(rays[i]);
      next.back().zeros.set(static_cast<std::size_t>(r));
    }
    const std::size_t need = static_cast<std::size_t>(k) >= 2 ? static_cast<std::size_t>(k) - 2 : 0;
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        const Bitset common = rays[p].zeros & rays[n].zeros;
        if (common.count() < need) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o != p && o != n && rays[o].zeros.contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        // value[p] * v_n - value[n] * v_p is tight on row r.
        Ray ray{value[p] * rays[n].v, common};
        simd::axpy(-value[n], {rays[p].v.data(), static_cast<std::size_t>(k)},
                   {ray.v.data(), static_cast<std::size_t>(k)});
        normalize(ray.v);
        ray.zeros.set(static_cast<std::size_t>(r));
        next.push_back(std::move(ray));
      }
    }
    rays = std::move(next);
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(rays.size());
  for (Ray& ray : rays) out.push_back(std::move(ray.v));
  return deduplicate(out);
}

std::vector<Eigen::VectorXd> section_vertices(const Eigen::MatrixXd& constraints,
                                              const Eigen::VectorXd& unit) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::VectorXd& ray : extreme_rays(constraints)) {
    const double s = unit.dot(ray);
    if (s <= lp::kTolerance) fail(ErrorCode::InvalidArgument, "normalization section is unbounded");
    out.push_back(ray / s);
  }
  return deduplicate(out);
}

std::vector<Eigen::VectorXd> dual_cone_rays(const Eigen::MatrixXd& generators) {
  return extreme_rays(generators.transpose());
}

std::vector<Eigen::VectorXd> deduplicate(const std::vector<Eigen::VectorXd>& points) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : points) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Eigen::VectorXd& q) {
      return (p - q).cwiseAbs().maxCoeff() <= kDedupTolerance;
    });
    if (!seen) out.push_back(p);
  }
  return out;
}

Eigen::MatrixXd to_columns(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) return {};
  Eigen::MatrixXd m(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = points[i];
  return m;
}

}  // namespace gptkit::polyhedral
