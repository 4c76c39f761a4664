#include "tomi/transform/transform.h"

#include <algorithm>
#include <stdexcept>

namespace tomi {

namespace {

struct SoundingNote {
  int pitch;
  int velocity;
};

std::vector<SoundingNote> soundingAt(const std::vector<NoteEvent>& notes,
                                     int64_t tick) {
  std::vector<SoundingNote> result;
  for (const NoteEvent& note : notes) {
    if (note.onset_ticks <= tick &&
        tick < note.onset_ticks + note.duration_ticks) {
      result.push_back({note.pitch, note.velocity});
    }
  }
  std::sort(result.begin(), result.end(),
            [](const SoundingNote& a, const SoundingNote& b) {
              return a.pitch < b.pitch;
            });
  return result;
}

}  // namespace

MidiClipData applyGeneral(const MidiClipData& clip, const TransformationNode& t,
                          int section_len_bars) {
  if (t.subclass == TransformSubclass::Fx) {
    throw std::invalid_argument(
        "fx transforms carry no action sequence to apply");
  }
  if (t.action_sequence.empty()) {
    throw std::invalid_argument("action sequence must not be empty");
  }
  if (clip.notes.empty()) {
    throw std::invalid_argument("cannot transform an empty clip");
  }
  if (section_len_bars <= 0) {
    throw std::invalid_argument("section length must be positive");
  }

  const int section_steps = section_len_bars * kStepsPerBar;
  const int64_t section_ticks =
      static_cast<int64_t>(section_len_bars) * kTicksPerBar;
  const int64_t source_ticks =
      static_cast<int64_t>(std::max(clip.length_bars, 1)) * kTicksPerBar;
  const int64_t effective_source =
      t.loop_mode == LoopMode::Trim ? std::min(source_ticks, section_ticks)
                                    : source_ticks;

  // Maps a section tick onto the source clip; -1 when no source remains.
  auto sourceTick = [&](int64_t section_tick) -> int64_t {
    if (t.loop_mode == LoopMode::Loop) return section_tick % source_ticks;
    return section_tick < effective_source ? section_tick : -1;
  };

  MidiClipData out;
  std::vector<SoundingNote> open;
  int open_step = 0;

  auto closeOpen = [&](int step) {
    const int64_t start = static_cast<int64_t>(open_step) * kTicksPerStep;
    const int64_t duration =
        static_cast<int64_t>(step - open_step) * kTicksPerStep;
    for (const SoundingNote& note : open) {
      out.notes.push_back({note.pitch, note.velocity, start, duration});
    }
    open.clear();
  };

  for (int step = 0; step < section_steps; ++step) {
    const ActionSymbol symbol =
        t.action_sequence[static_cast<size_t>(step) % t.action_sequence.size()];
    switch (symbol) {
      case ActionSymbol::Onset: {
        closeOpen(step);
        const int64_t src = sourceTick(static_cast<int64_t>(step) * kTicksPerStep);
        if (src >= 0) {
          open = soundingAt(clip.notes, src);
          open_step = step;
        }
        break;
      }
      case ActionSymbol::Sustain:
        // Extends whatever is open; a sustain over silence stays silent.
        break;
      case ActionSymbol::Rest:
        closeOpen(step);
        break;
    }
  }
  closeOpen(section_steps);

  finalizeClip(out);
  return out;
}

std::vector<DrumHit> applyDrum(const TransformationNode& t, int section_len_bars,
                               double tempo_bpm) {
  if (t.subclass != TransformSubclass::Drum) {
    throw std::invalid_argument("applyDrum requires a drum transform");
  }
  if (t.action_sequence.empty()) {
    throw std::invalid_argument("action sequence must not be empty");
  }
  if (section_len_bars <= 0 || tempo_bpm <= 0.0) {
    throw std::invalid_argument("section length and tempo must be positive");
  }

  const int section_steps = section_len_bars * kStepsPerBar;
  const int steps = t.loop_mode == LoopMode::Loop
                        ? section_steps
                        : std::min<int>(section_steps,
                                        static_cast<int>(t.action_sequence.size()));
  const double step_seconds = 60.0 / tempo_bpm / 4.0;  // one sixteenth

  std::vector<DrumHit> hits;
  for (int step = 0; step < steps; ++step) {
    const ActionSymbol symbol =
        t.action_sequence[static_cast<size_t>(step) % t.action_sequence.size()];
    if (symbol == ActionSymbol::Onset) {
      hits.push_back({static_cast<double>(step) * step_seconds, 1.0});
    }
  }
  return hits;
}

FxPlacement applyFx(const TransformationNode& t, int section_len_bars,
                    double tempo_bpm, double sample_duration_seconds) {
  if (t.subclass != TransformSubclass::Fx) {
    throw std::invalid_argument("applyFx requires an fx transform");
  }
  if (!t.alignment) {
    throw std::invalid_argument("fx transforms require an alignment");
  }
  if (section_len_bars <= 0 || tempo_bpm <= 0.0 ||
      sample_duration_seconds <= 0.0) {
    throw std::invalid_argument("lengths and tempo must be positive");
  }

  const double section_seconds = section_len_bars * barSeconds(tempo_bpm);
  FxPlacement placement;
  if (sample_duration_seconds <= section_seconds) {
    placement.region_seconds = sample_duration_seconds;
    placement.start_seconds = *t.alignment == FxAlignment::Left
                                  ? 0.0
                                  : section_seconds - sample_duration_seconds;
  } else {
    // Sample exceeds the section: clamp to the section span.
    placement.start_seconds = 0.0;
    placement.region_seconds = section_seconds;
    placement.head_trim_seconds = *t.alignment == FxAlignment::Right
                                      ? sample_duration_seconds - section_seconds
                                      : 0.0;
  }
  return placement;
}

std::vector<LoopSpan> fitLoop(int sample_len_bars, int section_len_bars,
                              LoopMode loop_mode) {
  if (sample_len_bars <= 0 || section_len_bars <= 0) {
    throw std::invalid_argument("loop and section lengths must be positive");
  }

  std::vector<LoopSpan> spans;
  if (loop_mode == LoopMode::Loop) {
    int remaining = section_len_bars;
    int repeat = 0;
    while (remaining > 0) {
      spans.push_back({repeat, std::min(sample_len_bars, remaining)});
      remaining -= sample_len_bars;
      ++repeat;
    }
  } else {  // once and trim both fit a single span
    spans.push_back({0, std::min(sample_len_bars, section_len_bars)});
  }
  return spans;
}

}  // namespace tomi
