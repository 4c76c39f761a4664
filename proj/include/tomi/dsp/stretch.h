#pragma once

#include <cstddef>
#include <vector>

namespace tomi::dsp {

/// Windowed overlap-add time stretch for mono audio. ratio is the output
/// duration multiplier (1.05 lengthens a 126 BPM loop to 120 BPM).
/// Windows are 50 ms Hann at 75% overlap; deterministic.
std::vector<float> stretchOverlapAdd(const std::vector<float>& input,
                                     double ratio, int sample_rate);

/// Linear-interpolation resampler for mono audio.
std::vector<float> resampleLinear(const std::vector<float>& input,
                                  int src_rate, int dst_rate);

}  // namespace tomi::dsp
