// Core node types, composition links, the document container, and the
// resolved-arrangement types shared by every other component.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace tomi {

// ---------------------------------------------------------------------------
// Timing constants
// ---------------------------------------------------------------------------

inline constexpr int kTicksPerQuarter = 480;
inline constexpr int kBeatsPerBar = 4;  // everything is 4/4
inline constexpr int kTicksPerBar = kTicksPerQuarter * kBeatsPerBar;
inline constexpr int kStepsPerBar = 16;  // sixteenth-note action grid
inline constexpr int kTicksPerStep = kTicksPerBar / kStepsPerBar;

// ---------------------------------------------------------------------------
// Enumerations
// ---------------------------------------------------------------------------

enum class PhraseLabel { Intro, Verse, PreChorus, Chorus, Bridge, Outro };

enum class TrackKind { Midi, Audio };

enum class MidiContentType { Chord, Bass, Melody, Arpeggio };

enum class KeyMode { Major, Minor };

enum class AudioSampleType { Loop, OneShot };

enum class ActionSymbol { Onset, Sustain, Rest };

enum class TransformSubclass { General, Drum, Fx };

enum class LoopMode { Once, Loop, Trim };

enum class FxAlignment { Left, Right };

const char* toString(PhraseLabel label);
const char* toString(TrackKind kind);
const char* toString(MidiContentType type);
const char* toString(KeyMode mode);
const char* toString(AudioSampleType type);
const char* toString(TransformSubclass subclass);
const char* toString(LoopMode mode);
const char* toString(FxAlignment alignment);

// Case-insensitive on the canonical names; std::nullopt on anything else.
std::optional<PhraseLabel> parsePhraseLabel(std::string_view text);
std::optional<TrackKind> parseTrackKind(std::string_view text);
std::optional<MidiContentType> parseMidiContentType(std::string_view text);
std::optional<KeyMode> parseKeyMode(std::string_view text);
std::optional<AudioSampleType> parseAudioSampleType(std::string_view text);
std::optional<TransformSubclass> parseTransformSubclass(std::string_view text);
std::optional<LoopMode> parseLoopMode(std::string_view text);
std::optional<FxAlignment> parseFxAlignment(std::string_view text);

/// Action sequence <-> compact "OSR" string.
std::string actionSequenceToString(const std::vector<ActionSymbol>& seq);
std::optional<std::vector<ActionSymbol>> parseActionSequence(std::string_view text);

// ---------------------------------------------------------------------------
// Document nodes
// ---------------------------------------------------------------------------

struct SectionNode {
  std::string name;
  PhraseLabel label = PhraseLabel::Verse;
  int length_bars = 4;  // valid documents keep this in [1, 64]
  bool operator==(const SectionNode&) const = default;
};

struct TrackNode {
  std::string name;
  TrackKind kind = TrackKind::Midi;
  bool operator==(const TrackNode&) const = default;
};

struct MidiClipSpec {
  std::string name;
  MidiContentType content_type = MidiContentType::Chord;
  int length_bars = 4;  // restricted to {4, 8, 16}
  std::optional<int> key_root;  // pitch class 0-11
  std::optional<KeyMode> mode;
  std::optional<std::vector<int>> root_progression;  // scale degrees 1-7
  bool operator==(const MidiClipSpec&) const = default;
};

struct AudioClipSpec {
  std::string name;
  AudioSampleType sample_type = AudioSampleType::Loop;
  std::vector<std::string> keywords;   // normalized lowercase tags
  std::optional<int> length_bars;      // loops only, {2, 4, 8, 16}
  bool operator==(const AudioClipSpec&) const = default;
};

using ClipSpec = std::variant<MidiClipSpec, AudioClipSpec>;

const std::string& clipName(const ClipSpec& clip);
TrackKind clipKind(const ClipSpec& clip);

struct TransformationNode {
  std::string name;
  TransformSubclass subclass = TransformSubclass::General;
  std::vector<ActionSymbol> action_sequence;  // empty allowed only for fx
  LoopMode loop_mode = LoopMode::Loop;
  std::optional<FxAlignment> alignment;  // fx only
  bool operator==(const TransformationNode&) const = default;
};

struct CompositionLink {
  std::string section_ref;
  std::string track_ref;
  std::string clip_ref;
  std::string transform_ref;
  bool operator==(const CompositionLink&) const = default;
};

struct KeySignature {
  int root = 0;  // pitch class 0-11
  KeyMode mode = KeyMode::Major;
  bool operator==(const KeySignature&) const = default;
};

/// The complete textual composition: node sets, section sequence, links,
/// and the global tempo/key.
struct TomiDocument {
  std::map<std::string, SectionNode> sections;
  std::map<std::string, TrackNode> tracks;
  std::map<std::string, ClipSpec> clips;
  std::map<std::string, TransformationNode> transforms;
  std::vector<std::string> section_sequence;  // repeats allowed
  std::vector<CompositionLink> links;
  double tempo_bpm = 120.0;
  KeySignature key;
  bool operator==(const TomiDocument&) const = default;
};

// ---------------------------------------------------------------------------
// Resolved-arrangement types
// ---------------------------------------------------------------------------

/// A single MIDI note at 480 ticks per quarter.
struct NoteEvent {
  int pitch = 60;     // 0-127
  int velocity = 96;  // 1-127
  int64_t onset_ticks = 0;
  int64_t duration_ticks = kTicksPerQuarter;

  bool operator==(const NoteEvent&) const = default;
  // Time-major ordering: sorting a note list orders it by onset.
  auto operator<=>(const NoteEvent& other) const {
    return std::tie(onset_ticks, pitch, duration_ticks, velocity) <=>
           std::tie(other.onset_ticks, other.pitch, other.duration_ticks,
                    other.velocity);
  }
};

struct SectionInstance {
  std::string section;
  int occurrence = 0;  // 0-based index among this section's appearances
  int start_bar = 0;
  int length_bars = 0;
  PhraseLabel label = PhraseLabel::Verse;
  bool operator==(const SectionInstance&) const = default;
};

struct Timeline {
  std::vector<SectionInstance> instances;
  int total_bars = 0;
  bool operator==(const Timeline&) const = default;
};

/// Audio content scheduled within one section instance. Times are seconds
/// relative to the instance start; the region never exceeds the section for
/// loops and fx, while one-shot tails may ring past it.
struct AudioRegionDesc {
  std::string path;
  double start_seconds = 0.0;
  double head_trim_seconds = 0.0;  // leading source audio dropped (fx overflow)
  double gain = 1.0;
  double stretch_ratio = 1.0;      // output duration multiplier (loops only)
  double region_seconds = 0.0;     // audible span; 0 = natural length
  bool one_shot = false;
  bool operator==(const AudioRegionDesc&) const = default;
};

struct PlacedMidiClip {
  std::string track;
  int instance_index = 0;          // into Timeline::instances
  std::vector<NoteEvent> notes;    // ticks relative to the instance start
  double gain = 1.0;
  bool operator==(const PlacedMidiClip&) const = default;
};

struct PlacedAudioClip {
  std::string track;
  int instance_index = 0;
  AudioRegionDesc region;
  bool operator==(const PlacedAudioClip&) const = default;
};

/// Fully resolved timeline of placed, transformed clips, ready to render.
struct Arrangement {
  Timeline timeline;
  std::vector<PlacedMidiClip> midi_placements;
  std::vector<PlacedAudioClip> audio_placements;
  double tempo_bpm = 120.0;
  KeySignature key;
};

/// Seconds per bar of 4/4 at the given tempo.
inline double barSeconds(double tempo_bpm) { return 240.0 / tempo_bpm; }

/// Seconds per 480-TPQ tick at the given tempo.
inline double tickSeconds(double tempo_bpm) {
  return 60.0 / (tempo_bpm * kTicksPerQuarter);
}

}  // namespace tomi
