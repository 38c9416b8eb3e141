#include <atomic>
#include <cassert>

#include "gptkit/simd/kernels.hpp"

namespace gptkit::simd {

namespace {

struct KernelTable {
  Isa isa;
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

constexpr KernelTable kScalarTable{Isa::Scalar, scalar::axpy, scalar::scale, scalar::dot,
                                   scalar::max_abs};
#if defined(GPTKIT_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Isa::Avx2, avx2::axpy, avx2::scale, avx2::dot, avx2::max_abs};
#endif
#if defined(GPTKIT_HAVE_NEON_KERNELS)
constexpr KernelTable kNeonTable{Isa::Neon, neon::axpy, neon::scale, neon::dot, neon::max_abs};
#endif

const KernelTable* table_for(Isa isa) {
  switch (isa) {
#if defined(GPTKIT_HAVE_AVX2_KERNELS)
    case Isa::Avx2:
      return &kAvx2Table;
#endif
#if defined(GPTKIT_HAVE_NEON_KERNELS)
    case Isa::Neon:
      return &kNeonTable;
#endif
    default:
      return &kScalarTable;
  }
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{table_for(detect_isa())};
  return table;
}

const KernelTable& kernels() { return *current().load(std::memory_order_acquire); }

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(GPTKIT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(GPTKIT_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return kernels().isa; }

Isa force_isa(Isa isa) {
  const Isa chosen = isa_available(isa) ? isa : Isa::Scalar;
  current().store(table_for(chosen), std::memory_order_release);
  return chosen;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  kernels().axpy(a, x.data(), y.data(), y.size());
}

void scale(double a, std::span<double> y) { kernels().scale(a, y.data(), y.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return kernels().dot(x.data(), y.data(), x.size());
}

double max_abs(std::span<const double> x) { return kernels().max_abs(x.data(), x.size()); }

}  // namespace gptkit::simd
