#include <atomic>

#include "tomi/dsp/kernels.h"

namespace tomi::dsp {

namespace {

std::atomic<KernelMode> g_requested{KernelMode::Auto};

bool avx2Available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

KernelMode resolve(KernelMode requested) {
  if (requested == KernelMode::Scalar) return KernelMode::Scalar;
  if (requested == KernelMode::Avx2) {
    return avx2Available() ? KernelMode::Avx2 : KernelMode::Scalar;
  }
  return avx2Available() ? KernelMode::Avx2 : KernelMode::Scalar;
}

}  // namespace

void setKernelMode(KernelMode mode) { g_requested.store(mode); }

KernelMode resolvedKernelMode() { return resolve(g_requested.load()); }

bool cpuHasAvx2() { return avx2Available(); }

#if defined(__x86_64__) || defined(_M_X64)
#define TOMI_DISPATCH(fn, ...)                       \
  if (resolvedKernelMode() == KernelMode::Avx2) {    \
    return avx2::fn(__VA_ARGS__);                    \
  }                                                  \
  return scalar::fn(__VA_ARGS__)
#else
#define TOMI_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void mixAdd(float* dst, const float* src, std::size_t n, float gain) {
  TOMI_DISPATCH(mixAdd, dst, src, n, gain);
}

void applyGain(float* x, std::size_t n, float gain) {
  TOMI_DISPATCH(applyGain, x, n, gain);
}

float peakAbs(const float* x, std::size_t n) { TOMI_DISPATCH(peakAbs, x, n); }

double dot(const double* a, const double* b, std::size_t n) {
  TOMI_DISPATCH(dot, a, b, n);
}

double sumSquares(const double* x, std::size_t n) {
  TOMI_DISPATCH(sumSquares, x, n);
}

#undef TOMI_DISPATCH

}  // namespace tomi::dsp
