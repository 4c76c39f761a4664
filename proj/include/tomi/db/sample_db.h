// Sample library databases: ingestion of MIDI/audio directories into
// SQLite files, attribute queries for clip specs, and seeded retrieval
// with discard-on-miss. Table layouts are documented in docs/db.md.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tomi/core/types.h"
#include "tomi/midi/analysis.h"

struct sqlite3;

namespace tomi {

struct MidiSampleRow {
  int64_t id = 0;
  std::string path;
  MidiContentType content_type = MidiContentType::Chord;
  int length_bars = 4;
  int key_root = 0;
  KeyMode mode = KeyMode::Major;
  std::optional<std::vector<int>> root_progression;
  int note_count = 0;
  bool extracted_stem = false;

  bool operator==(const MidiSampleRow&) const = default;
};

struct AudioSampleRow {
  int64_t id = 0;
  std::string path;
  AudioSampleType sample_type = AudioSampleType::Loop;
  std::vector<std::string> keywords;  // sorted lowercase
  std::optional<int> length_bars;     // loops only
  std::optional<double> source_bpm;   // loops only
  double duration_seconds = 0.0;

  bool operator==(const AudioSampleRow&) const = default;
};

using SampleBinding = std::variant<MidiSampleRow, AudioSampleRow>;

/// RAII SQLite handle with the sample tables created on open.
class SampleDb {
 public:
  static std::optional<SampleDb> open(const std::string& path,
                                       std::string* error = nullptr);

  SampleDb(SampleDb&& other) noexcept;
  SampleDb& operator=(SampleDb&& other) noexcept;
  SampleDb(const SampleDb&) = delete;
  SampleDb& operator=(const SampleDb&) = delete;
  ~SampleDb();

  sqlite3* handle() const { return handle_; }

  bool insertMidiRow(const MidiSampleRow& row, std::string* error = nullptr);
  bool insertAudioRow(const AudioSampleRow& row, std::string* error = nullptr);

 private:
  explicit SampleDb(sqlite3* handle) : handle_(handle) {}
  sqlite3* handle_ = nullptr;
};

struct IngestReport {
  int rows_added = 0;
  std::vector<std::string> skipped;  // "path: reason"
  bool ok = true;
  std::string error;
};

/// Analyzes every .mid/.midi file under dir, inserting one row per
/// analyzable file plus one row per extracted bass/melody stem. Stem MIDI
/// files are written under stems_dir (defaults to <db file>.stems). Files
/// with no notes are skipped and reported.
IngestReport ingestMidiDir(const std::string& dir, SampleDb& db,
                           const std::string& stems_dir = "");

/// Ingests audio files listed in a tab-separated manifest (see docs/db.md).
/// Entries whose file is missing or whose loop metadata is incomplete are
/// skipped and reported.
IngestReport ingestAudioDir(const std::string& dir, const std::string& manifest_path,
                            SampleDb& db);

/// Rows matching every attribute present in the clip spec, ordered by path.
std::vector<MidiSampleRow> queryMidi(const MidiClipSpec& spec, const SampleDb& db);

/// Sample type and (loops) exact length must match; row keywords must be a
/// superset of the clip spec keywords.
std::vector<AudioSampleRow> queryAudio(const AudioClipSpec& spec, const SampleDb& db);

struct ResolvedDocument {
  TomiDocument doc;
  std::map<std::string, SampleBinding> bindings;  // clip name -> chosen row
  std::vector<std::string> discarded_clips;
  std::vector<size_t> discarded_links;  // indices into doc.links
};

/// Binds each linked clip to one uniformly chosen matching row (seeded per
/// clip name, so unrelated clips never disturb each other's draw). Clips
/// with no match are discarded together with all of their links. Replays
/// bit-exactly for the same (doc, databases, seed).
ResolvedDocument retrieve(const TomiDocument& doc, const SampleDb& midi_db,
                          const SampleDb& audio_db, uint64_t seed);

}  // namespace tomi
