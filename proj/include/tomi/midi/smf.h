// Standard MIDI File reading (formats 0/1) and writing (format 0).
// Parsing merges every track into one note stream at 480 TPQ with tempo
// and meta events stripped.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tomi/core/types.h"

namespace tomi {

struct MidiClipData {
  std::vector<NoteEvent> notes;  // sorted by (onset, pitch)
  int ticks_per_quarter = kTicksPerQuarter;
  int length_bars = 0;  // ceil(last note end / bar); 0 for empty clips

  bool operator==(const MidiClipData&) const = default;
};

/// Recomputes length_bars from the note list and sorts notes canonically.
void finalizeClip(MidiClipData& clip);

struct SmfParseResult {
  bool ok = false;
  std::string error;
  size_t error_offset = 0;  // byte offset of the failure
  MidiClipData clip;
};

/// Overlapping note-ons on the same pitch truncate the earlier note;
/// unterminated notes close at end of track.
SmfParseResult parseMidiFile(std::span<const uint8_t> bytes);

/// Format 0, 480 TPQ, one tempo meta event. parse(write(x)) == x for clips
/// without same-pitch overlaps.
std::vector<uint8_t> writeMidiFile(const MidiClipData& clip, double tempo_bpm);

}  // namespace tomi
