#include "gptkit/composites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gptkit/distinguishability.hpp"
#include "gptkit/error.hpp"
#include "gptkit/hermitian.hpp"
#include "gptkit/lp.hpp"
#include "gptkit/polyhedral.hpp"

namespace gptkit {

using lp::kTolerance;

std::string_view to_string(CompositeKind kind) {
  return kind == CompositeKind::Min ? "min" : "max";
}

EffectConeGenerators effect_cone_generators(const StateSpace& space) {
  if (space.kind() != SpaceKind::Polytopic) {
    fail(ErrorCode::UnsupportedKind, "effect cone generators need a polytopic space");
  }
  if (space.ambient_dim() > kMaxConeDim) {
    fail(ErrorCode::ScaleLimit, "effect cone enumeration is limited to ambient_dim <= 10");
  }
  EffectConeGenerators out;
  for (Eigen::VectorXd& ray : polyhedral::dual_cone_rays(space.vertices())) {
    const double top = (ray.transpose() * space.vertices()).maxCoeff();
    out.generators.push_back({ray / top});
  }
  return out;
}

namespace {

void require_polytopic(const StateSpace& a, const StateSpace& b) {
  if (a.kind() != SpaceKind::Polytopic || b.kind() != SpaceKind::Polytopic) {
    fail(ErrorCode::UnsupportedKind, "tensor products are built for polytopic factors only");
  }
}

}  // namespace

CompositeSpace::CompositeSpace(CompositeKind kind, StateSpace a, StateSpace b)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)),
      unit_(kron(a_.unit(), b_.unit())), cache_(std::make_shared<VertexCache>()) {}

CompositeSpace min_tensor(const StateSpace& a, const StateSpace& b) {
  require_polytopic(a, b);
  CompositeSpace c(CompositeKind::Min, a, b);
  std::vector<Eigen::VectorXd> products;
  for (Eigen::Index i = 0; i < a.num_vertices(); ++i) {
    for (Eigen::Index j = 0; j < b.num_vertices(); ++j) {
      products.push_back(product_state(a.vertex(i), b.vertex(j)));
    }
  }
  c.product_vertices_ = polyhedral::to_columns(polyhedral::deduplicate(products));
  return c;
}

CompositeSpace max_tensor(const StateSpace& a, const StateSpace& b) {
  require_polytopic(a, b);
  CompositeSpace c(CompositeKind::Max, a, b);
  const auto ga = effect_cone_generators(a).generators;
  const auto gb = effect_cone_generators(b).generators;
  c.inequalities_.resize(static_cast<Eigen::Index>(ga.size() * gb.size()), c.ambient_dim());
  Eigen::Index row = 0;
  for (const Effect& e : ga) {
    for (const Effect& f : gb) c.inequalities_.row(row++) = kron(e.coeffs, f.coeffs).transpose();
  }
  return c;
}

bool CompositeSpace::contains(const Eigen::VectorXd& x) const {
  if (x.size() != ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, "composite state has the wrong dimension");
  }
  if (kind_ == CompositeKind::Min) {
    return contains_state(StateSpace::polytopic_trusted(product_vertices_, unit_), x);
  }
  if (std::fabs(unit_.dot(x) - 1.0) > kTolerance) return false;
  return (inequalities_ * x).minCoeff() >= -kTolerance;
}

const std::vector<Eigen::VectorXd>& CompositeSpace::vertices() const {
  std::call_once(cache_->once, [this] {
    if (kind_ == CompositeKind::Min) {
      for (Eigen::Index i = 0; i < product_vertices_.cols(); ++i) {
        cache_->vertices.push_back(product_vertices_.col(i));
      }
    } else {
      cache_->vertices = polyhedral::section_vertices(inequalities_, unit_);
    }
  });
  return cache_->vertices;
}

StateSpace CompositeSpace::as_state_space() const {
  return StateSpace::polytopic(polyhedral::to_columns(vertices()), unit_);
}

std::vector<Eigen::VectorXd> enumerate_vertices(const CompositeSpace& composite) {
  if (composite.kind() != CompositeKind::Max) {
    fail(ErrorCode::InvalidArgument, "vertex enumeration applies to maximal tensor products");
  }
  if (composite.inequalities().rows() > kMaxCompositeInequalities ||
      composite.ambient_dim() > kMaxCompositeDim) {
    fail(ErrorCode::ScaleLimit, "maximal tensor product too large to enumerate (" +
                                    std::to_string(composite.inequalities().rows()) +
                                    " inequalities, dimension " +
                                    std::to_string(composite.ambient_dim()) + ")");
  }
  const auto& verts = composite.vertices();
  // Certifies every vertex as extremal (throws otherwise).
  (void)StateSpace::polytopic(polyhedral::to_columns(verts), composite.unit());
  return verts;
}

Eigen::VectorXd product_state(const Eigen::VectorXd& omega_a, const Eigen::VectorXd& omega_b) {
  return kron(omega_a, omega_b);
}

namespace {

Eigen::VectorXd contract(const Eigen::VectorXd& omega, const Eigen::VectorXd& unit_a,
                         const Eigen::VectorXd& unit_b, Side side) {
  const Eigen::Index ka = unit_a.size();
  const Eigen::Index kb = unit_b.size();
  if (omega.size() != ka * kb) fail(ErrorCode::DimensionMismatch, "composite state dimension");
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      grid(omega.data(), ka, kb);
  if (side == Side::A) return grid * unit_b;
  return grid.transpose() * unit_a;
}

bool quantum_composite_contains(int na, int nb, const Eigen::VectorXd& x) {
  const CMatrix op = product_operator(x, na, nb);
  return std::fabs(op.trace().real() - 1.0) <= kTolerance &&
         hermitian_eigenvalues(op)(0) >= -kTolerance;
}

}  // namespace

Eigen::VectorXd reduced_state(const CompositeSpace& composite, const Eigen::VectorXd& omega,
                              Side side) {
  if (!composite.contains(omega)) fail(ErrorCode::NotAState, "not a state of the composite");
  return contract(omega, composite.factor_a().unit(), composite.factor_b().unit(), side);
}

Eigen::VectorXd reduced_state(const StateSpace& a, const StateSpace& b,
                              const Eigen::VectorXd& omega, Side side) {
  if (a.kind() == SpaceKind::Quantum && b.kind() == SpaceKind::Quantum) {
    if (!quantum_composite_contains(a.hilbert_dim(), b.hilbert_dim(), omega)) {
      fail(ErrorCode::NotAState, "not a state of the quantum composite");
    }
    return contract(omega, a.unit(), b.unit(), side);
  }
  return reduced_state(min_tensor(a, b), omega, side);
}

bool quantum_max_tensor_contains_sampled(int na, int nb, const Eigen::VectorXd& x, int samples,
                                         std::uint64_t seed) {
  const Eigen::VectorXd unit = kron(hermitian_coordinates(CMatrix::Identity(na, na)),
                                    hermitian_coordinates(CMatrix::Identity(nb, nb)));
  if (x.size() != unit.size()) fail(ErrorCode::DimensionMismatch, "composite state dimension");
  if (std::fabs(unit.dot(x) - 1.0) > kTolerance) return false;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const CVector pa = random_unit_vector(na, rng);
    const CVector pb = random_unit_vector(nb, rng);
    const Eigen::VectorXd effect =
        kron(hermitian_coordinates(pa * pa.adjoint()), hermitian_coordinates(pb * pb.adjoint()));
    if (effect.dot(x) < -kTolerance) return false;
  }
  return true;
}

namespace {

struct ProductFamily {
  int capacity_a = 0;
  int capacity_b = 0;
  std::vector<Eigen::VectorXd> states;
  std::vector<Effect> effects;
  std::vector<Effect> factor_effects_a;
  std::vector<Effect> factor_effects_b;
};

ProductFamily build_products(const StateSpace& a, const StateSpace& b) {
  const int cap_a_max = a.kind() == SpaceKind::Polytopic ? static_cast<int>(a.num_vertices())
                                                         : static_cast<int>(a.ambient_dim());
  const int cap_b_max = b.kind() == SpaceKind::Polytopic ? static_cast<int>(b.num_vertices())
                                                         : static_cast<int>(b.ambient_dim());
  const DistinguishabilityWitness wa = maximal_distinguishable_set(a, {}, cap_a_max);
  const DistinguishabilityWitness wb = maximal_distinguishable_set(b, {}, cap_b_max);
  ProductFamily f;
  f.capacity_a = static_cast<int>(wa.states.size());
  f.capacity_b = static_cast<int>(wb.states.size());
  f.factor_effects_a = wa.measurement.effects();
  f.factor_effects_b = wb.measurement.effects();
  for (std::size_t i = 0; i < wa.states.size(); ++i) {
    for (std::size_t j = 0; j < wb.states.size(); ++j) {
      f.states.push_back(product_state(wa.states[i], wb.states[j]));
      f.effects.push_back({kron(wa.measurement[i].coeffs, wb.measurement[j].coeffs)});
    }
  }
  return f;
}

SupermultiplicativityReport assemble(ProductFamily f, const Eigen::VectorXd& unit,
                                     bool states_ok, bool effects_ok) {
  SupermultiplicativityReport r;
  r.capacity_a = f.capacity_a;
  r.capacity_b = f.capacity_b;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(unit.size());
  for (const Effect& e : f.effects) total += e.coeffs;
  const bool sums_to_unit = (total - unit).cwiseAbs().maxCoeff() <= kTolerance;
  for (std::size_t i = 0; i < f.effects.size(); ++i) {
    for (std::size_t k = 0; k < f.states.size(); ++k) {
      const double expected = i == k ? 1.0 : 0.0;
      r.max_delta_error = std::max(r.max_delta_error, std::fabs(f.effects[i](f.states[k]) - expected));
    }
  }
  r.verified = states_ok && effects_ok && sums_to_unit && r.max_delta_error <= kWitnessTolerance;
  if (r.verified) r.lower_bound = f.capacity_a * f.capacity_b;
  r.product_states = std::move(f.states);
  r.product_effects = std::move(f.effects);
  return r;
}

}  // namespace

SupermultiplicativityReport check_supermultiplicativity(const CompositeSpace& composite) {
  ProductFamily f = build_products(composite.factor_a(), composite.factor_b());
  bool states_ok = true;
  for (const auto& s : f.states) states_ok = states_ok && composite.contains(s);
  // Checked on the composite's extreme points when the vertex list is
  // affordable. Otherwise (large Max composites) e (x) f >= 0 holds on
  // Omega_max whenever e and f are valid factor effects.
  bool effects_ok = true;
  if (composite.kind() == CompositeKind::Min ||
      (composite.inequalities().rows() <= kMaxCompositeInequalities &&
       composite.ambient_dim() <= kMaxCompositeDim)) {
    for (const Effect& e : f.effects) {
      for (const auto& v : composite.vertices()) {
        const double val = e(v);
        effects_ok = effects_ok && val >= -kTolerance && val <= 1.0 + kTolerance;
      }
    }
  } else {
    for (const Effect& e : f.factor_effects_a) effects_ok = effects_ok && is_effect(composite.factor_a(), e);
    for (const Effect& e : f.factor_effects_b) effects_ok = effects_ok && is_effect(composite.factor_b(), e);
  }
  return assemble(std::move(f), composite.unit(), states_ok, effects_ok);
}

SupermultiplicativityReport check_supermultiplicativity(const StateSpace& a, const StateSpace& b) {
  if (a.kind() == SpaceKind::Polytopic && b.kind() == SpaceKind::Polytopic) {
    return check_supermultiplicativity(min_tensor(a, b));
  }
  if (a.kind() != SpaceKind::Quantum || b.kind() != SpaceKind::Quantum) {
    fail(ErrorCode::UnsupportedKind, "supermultiplicativity needs two polytopic or two quantum factors");
  }
  const int na = a.hilbert_dim();
  const int nb = b.hilbert_dim();
  ProductFamily f = build_products(a, b);
  bool states_ok = true;
  for (const auto& s : f.states) states_ok = states_ok && quantum_composite_contains(na, nb, s);
  bool effects_ok = true;
  for (const Effect& e : f.effects) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(product_operator(e.coeffs, na, nb));
    effects_ok = effects_ok && ev(0) >= -kTolerance && ev(ev.size() - 1) <= 1.0 + kTolerance;
  }
  const Eigen::VectorXd unit = kron(a.unit(), b.unit());
  return assemble(std::move(f), unit, states_ok, effects_ok);
}

}  // namespace gptkit
