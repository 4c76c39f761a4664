#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tomi::dsp {

/// In-place radix-2 FFT; data.size() must be a power of two.
void fft(std::vector<std::complex<double>>& data);

/// Magnitude spectrum of a real frame: |FFT(x)| for bins 0..n/2 inclusive.
/// frame.size() must be a power of two.
std::vector<double> realMagnitudeSpectrum(const std::vector<double>& frame);

bool isPowerOfTwo(std::size_t n);

}  // namespace tomi::dsp
