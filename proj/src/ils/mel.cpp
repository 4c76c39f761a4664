#include "tomi/ils/mel.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tomi/dsp/fft.h"

namespace tomi {

double hzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double melToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> melCenterFrequencies(const MelParams& params, int sample_rate) {
  const double fmax = params.fmax > 0.0 ? params.fmax : sample_rate / 2.0;
  const double mel_lo = hzToMel(params.fmin);
  const double mel_hi = hzToMel(fmax);
  std::vector<double> centers(params.n_mels);
  // n_mels + 2 equally spaced mel points; the inner ones are centers.
  for (int m = 0; m < params.n_mels; ++m) {
    const double mel = mel_lo + (mel_hi - mel_lo) * (m + 1) / (params.n_mels + 1);
    centers[m] = melToHz(mel);
  }
  return centers;
}

std::vector<std::vector<double>> melSpectrogram(const std::vector<float>& mono,
                                                int sample_rate,
                                                const MelParams& params) {
  const size_t n_fft = static_cast<size_t>(params.n_fft);
  if (!dsp::isPowerOfTwo(n_fft)) {
    throw std::invalid_argument("n_fft must be a power of two");
  }
  if (mono.size() < n_fft) {
    throw std::invalid_argument("signal shorter than one analysis window");
  }
  const size_t hop = static_cast<size_t>(params.hop);
  const size_t n_frames = 1 + (mono.size() - n_fft) / hop;
  const size_t n_bins = n_fft / 2 + 1;

  // Triangular filters on the mel-spaced grid (edges at fmin/fmax).
  const double fmax = params.fmax > 0.0 ? params.fmax : sample_rate / 2.0;
  const double mel_lo = hzToMel(params.fmin);
  const double mel_hi = hzToMel(fmax);
  std::vector<double> edges(static_cast<size_t>(params.n_mels) + 2);
  for (size_t m = 0; m < edges.size(); ++m) {
    edges[m] = melToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(m) /
                                    (params.n_mels + 1));
  }
  std::vector<std::vector<double>> filterbank(
      static_cast<size_t>(params.n_mels), std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < params.n_mels; ++m) {
    const double left = edges[static_cast<size_t>(m)];
    const double center = edges[static_cast<size_t>(m) + 1];
    const double right = edges[static_cast<size_t>(m) + 2];
    for (size_t bin = 0; bin < n_bins; ++bin) {
      const double freq =
          static_cast<double>(bin) * sample_rate / static_cast<double>(n_fft);
      double weight = 0.0;
      if (freq > left && freq < center) {
        weight = (freq - left) / (center - left);
      } else if (freq >= center && freq < right) {
        weight = (right - freq) / (right - center);
      }
      filterbank[static_cast<size_t>(m)][bin] = weight;
    }
  }

  std::vector<double> window(n_fft);
  for (size_t i = 0; i < n_fft; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(n_fft));
  }

  std::vector<std::vector<double>> frames;
  frames.reserve(n_frames);
  std::vector<double> frame(n_fft);
  for (size_t f = 0; f < n_frames; ++f) {
    const size_t start = f * hop;
    for (size_t i = 0; i < n_fft; ++i) {
      frame[i] = static_cast<double>(mono[start + i]) * window[i];
    }
    const std::vector<double> mags = dsp::realMagnitudeSpectrum(frame);

    std::vector<double> mel_row(static_cast<size_t>(params.n_mels));
    for (int m = 0; m < params.n_mels; ++m) {
      double acc = 0.0;
      const std::vector<double>& filter = filterbank[static_cast<size_t>(m)];
      for (size_t bin = 0; bin < n_bins; ++bin) {
        acc += filter[bin] * mags[bin];
      }
      mel_row[static_cast<size_t>(m)] = std::log1p(acc);
    }
    frames.push_back(std::move(mel_row));
  }
  return frames;
}

}  // namespace tomi
