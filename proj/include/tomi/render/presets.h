// The eight built-in instrument presets (5 chord, 2 melody, 1 bass) and
// the seeded track-to-preset assignment.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "tomi/core/types.h"

namespace tomi {

enum class OscillatorShape { Sine, Saw, Square, Triangle };

enum class PresetRole { Chord, Melody, Bass };

struct AdsrParams {
  double attack_seconds = 0.01;
  double decay_seconds = 0.05;
  double sustain_level = 0.7;
  double release_seconds = 0.1;
};

struct InstrumentPreset {
  int id = 1;  // 1-8
  PresetRole role = PresetRole::Chord;
  OscillatorShape oscillator = OscillatorShape::Sine;
  AdsrParams adsr;
  double gain = 0.2;
};

const std::array<InstrumentPreset, 8>& instrumentPresets();
const InstrumentPreset& presetById(int id);

PresetRole roleForContent(MidiContentType type);

/// Dominant linked clip content per MIDI track; unlinked tracks default to
/// the chord role.
std::map<std::string, PresetRole> trackRoleHints(const TomiDocument& doc);

/// Deterministic seeded choice among the presets matching each track's
/// role.
std::map<std::string, int> assignPresets(
    const std::map<std::string, PresetRole>& track_roles, uint64_t seed);

}  // namespace tomi
