// Shared fixture builders: documents, MIDI clips, synthetic WAV samples,
// and populated sample databases in a scratch directory.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tomi/audio/wav_io.h"
#include "tomi/core/types.h"
#include "tomi/db/sample_db.h"
#include "tomi/midi/smf.h"
#include "tomi/util/rng.h"

namespace tomi::testing {

/// Unique scratch directory removed on destruction.
class ScratchDir {
 public:
  ScratchDir();
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

// --- documents --------------------------------------------------------------

/// 1 section, 1 MIDI track, 1 chord clip, 1 general transform, 1 link,
/// tempo 120, key C minor.
TomiDocument minimalDoc();

/// Four sections s1-s4 (sequence s1 s2 s3 s2), tracks t1-t3, clips c1-c3,
/// transforms f1-f3, three links with link 0 = (s2, t1, c1, f1).
TomiDocument exampleSongDoc();

/// Seeded structurally-valid document for round-trip fuzzing.
TomiDocument randomValidDoc(uint64_t seed, int n_sections = 10, int n_tracks = 20);

/// Seeded random note list without same-pitch overlaps (canonical form).
MidiClipData randomClip(uint64_t seed, int max_notes = 40);

// --- MIDI content -----------------------------------------------------------

/// Whole-note chords C-Am-F-G (one per bar, 4 bars) in C major.
MidiClipData chordProgressionClip();

/// Monophonic 8th-note bass line around MIDI 36, length_bars bars.
MidiClipData bassLineClip(int length_bars = 4);

/// C-E-G arpeggio in sixteenths, length_bars bars.
MidiClipData arpeggioClip(int length_bars = 4);

/// Stepwise quarter-note melody near MIDI 72.
MidiClipData melodyClip(int length_bars = 4);

// --- audio content ----------------------------------------------------------

/// Mono sine tone. Amplitude applies a short fade at both ends so fixture
/// loops splice cleanly.
AudioBuffer toneBuffer(double freq_hz, double seconds, int sample_rate = 44100,
                       double amplitude = 0.5);

/// Seeded noise burst with exponential decay (one-shot percussion stand-in).
AudioBuffer noiseBurstBuffer(uint64_t seed, double seconds,
                             int sample_rate = 44100, double amplitude = 0.6);

// --- databases ---------------------------------------------------------------

struct FixtureLibrary {
  std::string midi_db_path;
  std::string audio_db_path;
  std::string midi_dir;
  std::string audio_dir;
};

/// Writes MIDI files (chords, bass, arpeggio, melody at 4 and 8 bars) plus
/// tonal loops, percussion one-shots, and riser/faller one-shots with a
/// manifest, then ingests both databases under dir.
FixtureLibrary buildFixtureLibrary(const ScratchDir& dir);

}  // namespace tomi::testing
