#include "tomi/render/limiter.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tomi/dsp/kernels.h"

namespace tomi {

void limitMaster(AudioBuffer& buffer, double ceiling) {
  if (buffer.samples.empty() || ceiling <= 0.0) return;
  if (dsp::peakAbs(buffer.samples.data(), buffer.samples.size()) <=
      static_cast<float>(ceiling)) {
    return;  // sub-threshold input passes unchanged
  }

  const int channels = std::max(buffer.channels, 1);
  const size_t frames = buffer.samples.size() / static_cast<size_t>(channels);
  const size_t attack = std::max<size_t>(
      1, static_cast<size_t>(std::llround(0.005 * buffer.sample_rate)));
  const size_t release = std::max<size_t>(
      1, static_cast<size_t>(std::llround(0.050 * buffer.sample_rate)));

  // Per-frame required gain.
  std::vector<double> gain(frames, 1.0);
  for (size_t frame = 0; frame < frames; ++frame) {
    double peak = 0.0;
    for (int c = 0; c < channels; ++c) {
      peak = std::max(peak, std::fabs(static_cast<double>(
                                buffer.samples[frame * channels + c])));
    }
    if (peak > ceiling) gain[frame] = ceiling / peak;
  }

  // Backward pass ramps gain down ahead of each over (attack window);
  // forward pass recovers it gradually (release window). Both passes only
  // ever lower gain below the requirement, never raise it above.
  const double attack_step = 1.0 / static_cast<double>(attack);
  for (size_t i = frames; i-- > 1;) {
    gain[i - 1] = std::min(gain[i - 1], gain[i] + attack_step);
  }
  const double release_step = 1.0 / static_cast<double>(release);
  for (size_t i = 1; i < frames; ++i) {
    gain[i] = std::min(gain[i], gain[i - 1] + release_step);
  }

  for (size_t frame = 0; frame < frames; ++frame) {
    if (gain[frame] >= 1.0) continue;
    for (int c = 0; c < channels; ++c) {
      buffer.samples[frame * channels + c] = static_cast<float>(
          static_cast<double>(buffer.samples[frame * channels + c]) * gain[frame]);
    }
  }
}

}  // namespace tomi
