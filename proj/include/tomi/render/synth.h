// Offline synthesis of an arrangement: oscillator + ADSR rendering for
// MIDI placements, sample playback with tempo stretch for audio
// placements, and a deterministic fixed-order mixdown.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tomi/audio/wav_io.h"
#include "tomi/core/types.h"
#include "tomi/render/presets.h"

namespace tomi {

struct RenderConfig {
  int sample_rate = 44100;  // 44100 or 48000
  int bit_depth = 16;
  uint64_t seed = 0;        // preset assignment
  double limiter_ceiling = 0.97;
};

struct SynthResult {
  bool ok = false;
  std::string error;
  AudioBuffer master;  // stereo, pre-limiter
};

/// Renders every placement and sums tracks in sorted-name order so results
/// are bit-reproducible. Duration covers the timeline plus any release or
/// ring-out tail.
SynthResult synthesize(const Arrangement& arrangement,
                       const std::map<std::string, int>& track_presets,
                       const RenderConfig& config);

}  // namespace tomi
