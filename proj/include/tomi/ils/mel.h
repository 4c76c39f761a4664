#pragma once

#include <string>
#include <vector>

namespace tomi {

struct MelParams {
  int n_fft = 2048;
  int hop = 512;
  int n_mels = 128;
  double fmin = 0.0;
  double fmax = 0.0;  // 0 -> sample_rate / 2
};

/// HTK mel scale: 2595 * log10(1 + f / 700).
double hzToMel(double hz);
double melToHz(double mel);

/// Triangular filterbank center frequencies (n_mels entries).
std::vector<double> melCenterFrequencies(const MelParams& params, int sample_rate);

/// Log-compressed mel spectrogram: Hann-windowed magnitude STFT through a
/// triangular HTK filterbank, then log(1 + x). One row per frame,
/// 1 + floor((N - n_fft) / hop) frames. Throws std::invalid_argument when
/// the signal is shorter than one window.
std::vector<std::vector<double>> melSpectrogram(const std::vector<float>& mono,
                                                int sample_rate,
                                                const MelParams& params = {});

}  // namespace tomi
