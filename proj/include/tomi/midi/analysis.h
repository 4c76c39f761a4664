// Musical feature extraction for MIDI clips: key estimation, content-type
// classification, bar length, chord root progressions, and stem extraction
// for database augmentation.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tomi/midi/smf.h"

namespace tomi {

struct MidiFeatures {
  MidiContentType content_type = MidiContentType::Melody;
  int key_root = 0;
  KeyMode mode = KeyMode::Major;
  int length_bars = 0;
  std::optional<std::vector<int>> root_progression;  // chords only

  bool operator==(const MidiFeatures&) const = default;
};

/// Thresholds for the classification heuristics; defaults documented in
/// docs/db.md.
struct AnalysisConfig {
  double chord_polyphony_ratio = 0.6;  // sounding time with >=3 voices
  int bass_pitch_ceiling = 48;         // exclusive mean-pitch bound
  int arpeggio_min_period = 3;
  int arpeggio_max_period = 8;
  double arpeggio_coverage = 0.7;
};

/// Krumhansl-Schmuckler profile correlation over a duration-weighted
/// pitch-class histogram. Ties break toward the lower pitch class, major
/// before minor. Throws std::invalid_argument on empty input.
std::pair<int, KeyMode> estimateKey(const std::vector<NoteEvent>& notes);

/// Rules applied in order: chord (polyphony ratio), bass (monophonic, low
/// register), arpeggio (monophonic repeating cycle), else melody.
MidiContentType classifyContentType(const std::vector<NoteEvent>& notes,
                                    const AnalysisConfig& config = {});

/// Key + content type + bar length + (chords) root progression.
MidiFeatures analyzeFeatures(const MidiClipData& clip,
                             const AnalysisConfig& config = {});

/// For chord clips, derives "bass" (lowest tone per chord onset, folded to
/// a low register), "melody" (highest tone per onset), and "chord" (the
/// source unchanged). Non-chord input yields an empty map.
std::map<std::string, MidiClipData> extractStems(const MidiClipData& clip,
                                                 const MidiFeatures& features);

/// Scale degree (1-7) of a pitch class relative to a key; non-diatonic
/// classes collapse onto the nearest scale tone below.
int scaleDegree(int pitch_class, int key_root, KeyMode mode);

}  // namespace tomi
