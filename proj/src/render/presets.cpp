#include "tomi/render/presets.h"

#include <stdexcept>
#include <vector>

#include "tomi/util/rng.h"

namespace tomi {

const std::array<InstrumentPreset, 8>& instrumentPresets() {
  static const std::array<InstrumentPreset, 8> presets = {{
      {1, PresetRole::Chord, OscillatorShape::Saw, {0.010, 0.080, 0.60, 0.120}, 0.16},
      {2, PresetRole::Chord, OscillatorShape::Square, {0.020, 0.100, 0.50, 0.150}, 0.13},
      {3, PresetRole::Chord, OscillatorShape::Triangle, {0.030, 0.120, 0.70, 0.180}, 0.22},
      {4, PresetRole::Chord, OscillatorShape::Sine, {0.020, 0.050, 0.80, 0.160}, 0.24},
      {5, PresetRole::Chord, OscillatorShape::Saw, {0.005, 0.060, 0.55, 0.100}, 0.15},
      {6, PresetRole::Melody, OscillatorShape::Square, {0.005, 0.050, 0.70, 0.120}, 0.18},
      {7, PresetRole::Melody, OscillatorShape::Saw, {0.004, 0.040, 0.65, 0.100}, 0.17},
      {8, PresetRole::Bass, OscillatorShape::Sine, {0.004, 0.030, 0.90, 0.080}, 0.28},
  }};
  return presets;
}

const InstrumentPreset& presetById(int id) {
  for (const InstrumentPreset& preset : instrumentPresets()) {
    if (preset.id == id) return preset;
  }
  throw std::invalid_argument("preset id out of range: " + std::to_string(id));
}

PresetRole roleForContent(MidiContentType type) {
  switch (type) {
    case MidiContentType::Bass: return PresetRole::Bass;
    case MidiContentType::Melody:
    case MidiContentType::Arpeggio: return PresetRole::Melody;
    case MidiContentType::Chord: return PresetRole::Chord;
  }
  return PresetRole::Chord;
}

std::map<std::string, PresetRole> trackRoleHints(const TomiDocument& doc) {
  std::map<std::string, PresetRole> roles;
  for (const auto& [name, track] : doc.tracks) {
    if (track.kind != TrackKind::Midi) continue;
    // Dominant content type over this track's links; ties resolve in enum
    // order (chord, bass, melody, arpeggio).
    std::array<int, 4> counts{};
    for (const CompositionLink& link : doc.links) {
      if (link.track_ref != name) continue;
      auto clip = doc.clips.find(link.clip_ref);
      if (clip == doc.clips.end()) continue;
      if (const auto* midi = std::get_if<MidiClipSpec>(&clip->second)) {
        counts[static_cast<size_t>(midi->content_type)]++;
      }
    }
    int best = 0;
    for (int i = 1; i < 4; ++i) {
      if (counts[i] > counts[best]) best = i;
    }
    roles[name] = roleForContent(static_cast<MidiContentType>(best));
  }
  return roles;
}

std::map<std::string, int> assignPresets(
    const std::map<std::string, PresetRole>& track_roles, uint64_t seed) {
  std::map<std::string, int> assignment;
  for (const auto& [track, role] : track_roles) {
    std::vector<int> candidates;
    for (const InstrumentPreset& preset : instrumentPresets()) {
      if (preset.role == role) candidates.push_back(preset.id);
    }
    Rng rng = seededFor(seed, track);
    assignment[track] = candidates[static_cast<size_t>(
        rng.uniformInt(0, static_cast<int64_t>(candidates.size()) - 1))];
  }
  return assignment;
}

}  // namespace tomi
