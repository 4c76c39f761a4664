#pragma once

#include "tomi/audio/wav_io.h"

namespace tomi {

/// Lookahead peak limiter (5 ms attack ramp, 50 ms release). Output peak
/// never exceeds the ceiling; input already under the ceiling passes
/// through bit-identically.
void limitMaster(AudioBuffer& buffer, double ceiling);

}  // namespace tomi
