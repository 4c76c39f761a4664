// Hot arithmetic inner loops behind the renderer and the similarity
// metrics. Each kernel has a scalar reference implementation and an AVX2
// variant; the dispatched entry points pick one at runtime from CPU
// features (overridable for testing). Element-wise kernels are bit-exact
// across variants; reductions that reorder additions (dot, sumSquares)
// agree to floating-point tolerance and are equivalence-tested.

#pragma once

#include <cstddef>

namespace tomi::dsp {

enum class KernelMode { Auto, Scalar, Avx2 };

/// Overrides variant selection; Auto re-enables CPU detection.
void setKernelMode(KernelMode mode);

/// The variant the dispatched entry points currently resolve to.
KernelMode resolvedKernelMode();

bool cpuHasAvx2();

// Dispatched entry points ----------------------------------------------------

/// dst[i] += src[i] * gain
void mixAdd(float* dst, const float* src, std::size_t n, float gain);

/// x[i] *= gain
void applyGain(float* x, std::size_t n, float gain);

/// max(|x[i]|); 0 for empty input.
float peakAbs(const float* x, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

double sumSquares(const double* x, std::size_t n);

// Reference kernels ----------------------------------------------------------

namespace scalar {
void mixAdd(float* dst, const float* src, std::size_t n, float gain);
void applyGain(float* x, std::size_t n, float gain);
float peakAbs(const float* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sumSquares(const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void mixAdd(float* dst, const float* src, std::size_t n, float gain);
void applyGain(float* x, std::size_t n, float gain);
float peakAbs(const float* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sumSquares(const double* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace tomi::dsp
