#include "tomi/dsp/stretch.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tomi::dsp {

namespace {

/// Normalized cross-correlation between two input segments.
double segmentSimilarity(const std::vector<float>& x, std::size_t a,
                         std::size_t b, std::size_t len) {
  double dot = 0.0;
  double energy_a = 0.0;
  double energy_b = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double sa = a + i < x.size() ? x[a + i] : 0.0;
    const double sb = b + i < x.size() ? x[b + i] : 0.0;
    dot += sa * sb;
    energy_a += sa * sa;
    energy_b += sb * sb;
  }
  const double denom = std::sqrt(energy_a * energy_b);
  return denom > 1e-12 ? dot / denom : 0.0;
}

}  // namespace

std::vector<float> stretchOverlapAdd(const std::vector<float>& input,
                                     double ratio, int sample_rate) {
  if (input.empty() || ratio <= 0.0) return {};
  if (ratio == 1.0) return input;

  // 50 ms Hann windows at 75% output overlap. Frames are copied verbatim
  // from the source (pitch-preserving); each frame's source position is
  // aligned against the previous frame's natural continuation by a short
  // similarity search so splices stay coherent.
  const std::size_t win = std::max<std::size_t>(
      64, static_cast<std::size_t>(std::lround(0.050 * sample_rate)));
  const std::size_t hop = std::max<std::size_t>(1, win / 4);
  const std::size_t search = hop / 2;
  const std::size_t compare_len = hop;
  const std::size_t out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(input.size()) * ratio));

  std::vector<double> window(win);
  for (std::size_t i = 0; i < win; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(win));
  }

  std::vector<double> acc(out_len, 0.0);
  std::vector<double> norm(out_len, 0.0);

  std::size_t chosen_prev = 0;
  for (std::size_t frame = 0;; ++frame) {
    const std::size_t out_pos = frame * hop;
    if (out_pos >= out_len) break;

    const std::int64_t nominal = static_cast<std::int64_t>(
        std::llround(static_cast<double>(out_pos) / ratio));
    std::size_t chosen = static_cast<std::size_t>(std::max<std::int64_t>(0, nominal));
    if (frame > 0) {
      const std::size_t continuation = chosen_prev + hop;
      double best = -2.0;
      const std::int64_t lo = std::max<std::int64_t>(
          0, nominal - static_cast<std::int64_t>(search));
      const std::int64_t hi = nominal + static_cast<std::int64_t>(search);
      for (std::int64_t candidate = lo; candidate <= hi; ++candidate) {
        const double score = segmentSimilarity(
            input, continuation, static_cast<std::size_t>(candidate), compare_len);
        if (score > best) {
          best = score;
          chosen = static_cast<std::size_t>(candidate);
        }
      }
    }
    chosen_prev = chosen;

    for (std::size_t i = 0; i < win; ++i) {
      const std::size_t out_idx = out_pos + i;
      if (out_idx >= out_len) break;
      const std::size_t in_idx = chosen + i;
      const double sample = in_idx < input.size() ? input[in_idx] : 0.0;
      acc[out_idx] += sample * window[i];
      norm[out_idx] += window[i];
    }
  }

  std::vector<float> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    out[i] = norm[i] > 1e-9 ? static_cast<float>(acc[i] / norm[i]) : 0.0f;
  }
  return out;
}

std::vector<float> resampleLinear(const std::vector<float>& input,
                                  int src_rate, int dst_rate) {
  if (input.empty() || src_rate <= 0 || dst_rate <= 0) return {};
  if (src_rate == dst_rate) return input;

  const double step = static_cast<double>(src_rate) / dst_rate;
  const std::size_t out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(input.size()) * dst_rate / src_rate));
  std::vector<float> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * step;
    const std::size_t i0 = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i0);
    const float s0 = i0 < input.size() ? input[i0] : 0.0f;
    const float s1 = i0 + 1 < input.size() ? input[i0 + 1] : s0;
    out[i] = static_cast<float>(s0 + (s1 - s0) * frac);
  }
  return out;
}

}  // namespace tomi::dsp
