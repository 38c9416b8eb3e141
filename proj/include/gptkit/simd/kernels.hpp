#pragma once

// Dense double-precision kernels used by the simplex tableau and the
// double-description ray updates. Each kernel has a scalar reference
// implementation plus ISA-specific variants; the dispatcher picks one at
// first use based on what the running CPU supports.

#include <cstddef>
#include <span>
#include <string_view>

namespace gptkit::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Best ISA the running CPU supports among the variants compiled in.
Isa detect_isa();

/// ISA currently used by the dispatched kernels.
Isa active_isa();

/// Overrides the dispatched ISA. Requesting an unsupported ISA falls back to
/// Scalar. Returns the ISA actually selected.
Isa force_isa(Isa isa);

bool isa_available(Isa isa);

// Dispatched entry points. x and y must have equal length.

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y *= a
void scale(double a, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
/// max_i |x_i|, 0 for an empty span
double max_abs(std::span<const double> x);

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GPTKIT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define GPTKIT_HAVE_NEON_KERNELS 1
namespace neon {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace gptkit::simd
