#include <cmath>

#include "tomi/dsp/kernels.h"

namespace tomi::dsp::scalar {

void mixAdd(float* dst, const float* src, std::size_t n, float gain) {
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] += src[i] * gain;
  }
}

void applyGain(float* x, std::size_t n, float gain) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= gain;
  }
}

float peakAbs(const float* x, std::size_t n) {
  float peak = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    float a = std::fabs(x[i]);
    if (a > peak) peak = a;
  }
  return peak;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double sumSquares(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] * x[i];
  }
  return acc;
}

}  // namespace tomi::dsp::scalar
