// Canonical RIFF/WAVE PCM16 reading and writing. Samples are float in
// [-1, 1] scaled by 32768, so values on the 16-bit grid round-trip exactly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tomi {

struct AudioBuffer {
  int sample_rate = 44100;
  int channels = 2;
  std::vector<float> samples;  // interleaved

  size_t frameCount() const {
    return channels > 0 ? samples.size() / static_cast<size_t>(channels) : 0;
  }
  double durationSeconds() const {
    return sample_rate > 0
               ? static_cast<double>(frameCount()) / sample_rate
               : 0.0;
  }
};

/// PCM16 only; unsupported encodings return nullopt.
std::optional<AudioBuffer> readWavFile(const std::string& path);

/// 44-byte header + PCM16 data; deterministic bytes for identical input.
bool writeWavPcm16(const std::string& path, const AudioBuffer& buffer);

std::vector<uint8_t> encodeWavPcm16(const AudioBuffer& buffer);

/// Channel-averaged mono view.
std::vector<float> monoMixdown(const AudioBuffer& buffer);

int16_t floatToPcm16(float sample);
inline float pcm16ToFloat(int16_t sample) {
  return static_cast<float>(sample) / 32768.0f;
}

}  // namespace tomi
