// AVX2 variants. Compiled with -mavx2 (no FMA) so the per-element float
// operations round identically to the scalar reference; only the reduction
// kernels reorder additions.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "tomi/dsp/kernels.h"

namespace tomi::dsp::avx2 {

void mixAdd(float* dst, const float* src, std::size_t n, float gain) {
  const __m256 vgain = _mm256_set1_ps(gain);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 d = _mm256_loadu_ps(dst + i);
    __m256 s = _mm256_loadu_ps(src + i);
    d = _mm256_add_ps(d, _mm256_mul_ps(s, vgain));
    _mm256_storeu_ps(dst + i, d);
  }
  for (; i < n; ++i) {
    dst[i] += src[i] * gain;
  }
}

void applyGain(float* x, std::size_t n, float gain) {
  const __m256 vgain = _mm256_set1_ps(gain);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), vgain));
  }
  for (; i < n; ++i) {
    x[i] *= gain;
  }
}

float peakAbs(const float* x, std::size_t n) {
  const __m256 sign_mask = _mm256_set1_ps(-0.0f);
  __m256 vpeak = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_andnot_ps(sign_mask, _mm256_loadu_ps(x + i));
    vpeak = _mm256_max_ps(vpeak, v);
  }
  alignas(32) float lanes[8];
  _mm256_store_ps(lanes, vpeak);
  float peak = 0.0f;
  for (float lane : lanes) {
    if (lane > peak) peak = lane;
  }
  for (; i < n; ++i) {
    float a = std::fabs(x[i]);
    if (a > peak) peak = a;
  }
  return peak;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                           _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    sum += a[i] * b[i];
  }
  return sum;
}

double sumSquares(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    sum += x[i] * x[i];
  }
  return sum;
}

}  // namespace tomi::dsp::avx2

#endif  // x86_64
