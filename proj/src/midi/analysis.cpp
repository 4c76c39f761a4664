#include "tomi/midi/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace tomi {

namespace {

// Krumhansl-Schmuckler key profiles.
constexpr std::array<double, 12> kMajorProfile = {
    6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88};
constexpr std::array<double, 12> kMinorProfile = {
    6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17};

double pearson(const std::array<double, 12>& x, const std::array<double, 12>& y) {
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (int i = 0; i < 12; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= 12.0;
  mean_y /= 12.0;
  double cov = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x <= 0.0 || var_y <= 0.0) return 0.0;
  return cov / std::sqrt(var_x * var_y);
}

/// Merged (time, delta) boundaries for counting simultaneous voices.
struct Edge {
  int64_t tick;
  int delta;
};

bool isMonophonic(const std::vector<NoteEvent>& notes) {
  std::vector<NoteEvent> sorted = notes;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i) {
    const NoteEvent& prev = sorted[i - 1];
    if (sorted[i].onset_ticks < prev.onset_ticks + prev.duration_ticks) {
      return false;
    }
  }
  return true;
}

double polyphonyRatio(const std::vector<NoteEvent>& notes) {
  std::vector<Edge> edges;
  edges.reserve(notes.size() * 2);
  for (const NoteEvent& note : notes) {
    edges.push_back({note.onset_ticks, +1});
    edges.push_back({note.onset_ticks + note.duration_ticks, -1});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    return a.delta > b.delta;  // onsets before releases at the same tick
  });

  int voices = 0;
  int64_t sounding = 0;
  int64_t thick = 0;  // >= 3 simultaneous voices
  for (size_t i = 0; i < edges.size(); ++i) {
    if (i > 0) {
      const int64_t span = edges[i].tick - edges[i - 1].tick;
      if (voices >= 1) sounding += span;
      if (voices >= 3) thick += span;
    }
    voices += edges[i].delta;
  }
  return sounding > 0 ? static_cast<double>(thick) / static_cast<double>(sounding)
                      : 0.0;
}

bool hasPitchCycle(const std::vector<NoteEvent>& notes, int min_period,
                   int max_period, double coverage) {
  std::vector<NoteEvent> sorted = notes;
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  for (int period = min_period; period <= max_period; ++period) {
    if (n <= period) break;
    int matches = 0;
    for (int i = period; i < n; ++i) {
      if (sorted[i].pitch == sorted[i - period].pitch) ++matches;
    }
    if (static_cast<double>(matches) / static_cast<double>(n - period) >=
        coverage) {
      return true;
    }
  }
  return false;
}

/// Pitches sounding at a given tick.
std::vector<int> soundingPitches(const std::vector<NoteEvent>& notes,
                                 int64_t tick) {
  std::vector<int> pitches;
  for (const NoteEvent& note : notes) {
    if (note.onset_ticks <= tick &&
        tick < note.onset_ticks + note.duration_ticks) {
      pitches.push_back(note.pitch);
    }
  }
  std::sort(pitches.begin(), pitches.end());
  return pitches;
}

/// Chord segment boundaries: each distinct onset tick.
std::vector<int64_t> onsetTicks(const std::vector<NoteEvent>& notes) {
  std::vector<int64_t> ticks;
  for (const NoteEvent& note : notes) ticks.push_back(note.onset_ticks);
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  return ticks;
}

/// Folds a pitch to the highest octave placement not above C3 (MIDI 48).
int foldToBassRegister(int pitch) {
  const int pc = ((pitch % 12) + 12) % 12;
  return 48 - ((48 - pc) % 12);
}

}  // namespace

int scaleDegree(int pitch_class, int key_root, KeyMode mode) {
  // Offset-from-root -> degree, non-diatonic classes mapping onto the
  // nearest scale tone below.
  static constexpr std::array<int, 12> kMajorDegrees = {1, 1, 2, 2, 3, 4,
                                                        4, 5, 5, 6, 6, 7};
  static constexpr std::array<int, 12> kMinorDegrees = {1, 1, 2, 3, 3, 4,
                                                        4, 5, 6, 6, 7, 7};
  const int offset = ((pitch_class - key_root) % 12 + 12) % 12;
  return mode == KeyMode::Major ? kMajorDegrees[offset] : kMinorDegrees[offset];
}

std::pair<int, KeyMode> estimateKey(const std::vector<NoteEvent>& notes) {
  if (notes.empty()) {
    throw std::invalid_argument("cannot estimate key of an empty clip");
  }

  std::array<double, 12> histogram{};
  for (const NoteEvent& note : notes) {
    const int pc = ((note.pitch % 12) + 12) % 12;
    histogram[pc] += static_cast<double>(note.duration_ticks);
  }

  int best_root = 0;
  KeyMode best_mode = KeyMode::Major;
  double best_score = -2.0;
  // Major before minor, lower root first: strict > keeps the tie-break.
  for (int mode_index = 0; mode_index < 2; ++mode_index) {
    const auto& profile = mode_index == 0 ? kMajorProfile : kMinorProfile;
    for (int root = 0; root < 12; ++root) {
      std::array<double, 12> rotated;
      for (int pc = 0; pc < 12; ++pc) {
        rotated[pc] = profile[((pc - root) % 12 + 12) % 12];
      }
      const double score = pearson(histogram, rotated);
      if (score > best_score) {
        best_score = score;
        best_root = root;
        best_mode = mode_index == 0 ? KeyMode::Major : KeyMode::Minor;
      }
    }
  }
  return {best_root, best_mode};
}

MidiContentType classifyContentType(const std::vector<NoteEvent>& notes,
                                    const AnalysisConfig& config) {
  if (notes.empty()) {
    throw std::invalid_argument("cannot classify an empty clip");
  }

  if (polyphonyRatio(notes) >= config.chord_polyphony_ratio) {
    return MidiContentType::Chord;
  }
  if (isMonophonic(notes)) {
    double mean_pitch = 0.0;
    for (const NoteEvent& note : notes) mean_pitch += note.pitch;
    mean_pitch /= static_cast<double>(notes.size());
    if (mean_pitch < config.bass_pitch_ceiling) {
      return MidiContentType::Bass;
    }
    if (hasPitchCycle(notes, config.arpeggio_min_period,
                      config.arpeggio_max_period, config.arpeggio_coverage)) {
      return MidiContentType::Arpeggio;
    }
  }
  return MidiContentType::Melody;
}

MidiFeatures analyzeFeatures(const MidiClipData& clip,
                             const AnalysisConfig& config) {
  if (clip.notes.empty()) {
    throw std::invalid_argument("cannot analyze an empty clip");
  }

  MidiFeatures features;
  features.content_type = classifyContentType(clip.notes, config);
  auto [root, mode] = estimateKey(clip.notes);
  features.key_root = root;
  features.mode = mode;
  MidiClipData sized = clip;
  finalizeClip(sized);
  features.length_bars = sized.length_bars;

  if (features.content_type == MidiContentType::Chord) {
    std::vector<int> progression;
    for (int64_t tick : onsetTicks(clip.notes)) {
      std::vector<int> pitches;
      for (const NoteEvent& note : clip.notes) {
        if (note.onset_ticks == tick) pitches.push_back(note.pitch);
      }
      const int lowest = *std::min_element(pitches.begin(), pitches.end());
      progression.push_back(
          scaleDegree(((lowest % 12) + 12) % 12, features.key_root, features.mode));
    }
    features.root_progression = std::move(progression);
  }
  return features;
}

std::map<std::string, MidiClipData> extractStems(const MidiClipData& clip,
                                                 const MidiFeatures& features) {
  std::map<std::string, MidiClipData> stems;
  if (features.content_type != MidiContentType::Chord || clip.notes.empty()) {
    return stems;
  }

  const std::vector<int64_t> onsets = onsetTicks(clip.notes);
  const int64_t clip_end = static_cast<int64_t>(features.length_bars) * kTicksPerBar;

  MidiClipData bass;
  MidiClipData melody;
  for (size_t i = 0; i < onsets.size(); ++i) {
    const int64_t tick = onsets[i];
    const int64_t next = i + 1 < onsets.size() ? onsets[i + 1] : clip_end;
    if (next <= tick) continue;
    const std::vector<int> pitches = soundingPitches(clip.notes, tick);
    if (pitches.empty()) continue;
    bass.notes.push_back({foldToBassRegister(pitches.front()), 96, tick, next - tick});
    melody.notes.push_back({pitches.back(), 96, tick, next - tick});
  }
  finalizeClip(bass);
  finalizeClip(melody);

  MidiClipData chord = clip;
  finalizeClip(chord);

  stems.emplace("bass", std::move(bass));
  stems.emplace("melody", std::move(melody));
  stems.emplace("chord", std::move(chord));
  return stems;
}

}  // namespace tomi
