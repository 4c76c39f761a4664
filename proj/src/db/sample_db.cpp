#include "tomi/db/sample_db.h"

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "tomi/audio/wav_io.h"
#include "tomi/midi/smf.h"
#include "tomi/util/file_io.h"
#include "tomi/util/rng.h"

namespace fs = std::filesystem;

namespace tomi {

namespace {

constexpr const char* kSchemaSql = R"sql(
CREATE TABLE IF NOT EXISTS midi_samples (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  path TEXT NOT NULL,
  content_type TEXT NOT NULL,
  length_bars INTEGER NOT NULL,
  key_root INTEGER NOT NULL,
  mode TEXT NOT NULL,
  root_progression TEXT,
  note_count INTEGER NOT NULL,
  source TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS audio_samples (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  path TEXT NOT NULL,
  sample_type TEXT NOT NULL,
  keywords TEXT NOT NULL,
  length_bars INTEGER,
  source_bpm REAL,
  duration_seconds REAL NOT NULL
);
)sql";

std::string encodeProgression(const std::vector<int>& degrees) {
  std::ostringstream out;
  for (size_t i = 0; i < degrees.size(); ++i) {
    if (i > 0) out << ",";
    out << degrees[i];
  }
  return out.str();
}

std::vector<int> decodeProgression(const std::string& encoded) {
  std::vector<int> degrees;
  std::istringstream in(encoded);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) degrees.push_back(std::stoi(token));
  }
  return degrees;
}

std::string joinKeywords(std::vector<std::string> keywords) {
  std::sort(keywords.begin(), keywords.end());
  keywords.erase(std::unique(keywords.begin(), keywords.end()), keywords.end());
  std::ostringstream out;
  for (size_t i = 0; i < keywords.size(); ++i) {
    if (i > 0) out << " ";
    out << keywords[i];
  }
  return out.str();
}

std::vector<std::string> splitKeywords(const std::string& joined) {
  std::vector<std::string> keywords;
  std::istringstream in(joined);
  std::string token;
  while (in >> token) keywords.push_back(token);
  return keywords;
}

std::string normalizeTag(std::string tag) {
  // Trim surrounding whitespace, lowercase.
  const auto begin = tag.find_first_not_of(" \t\r\n");
  const auto end = tag.find_last_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  tag = tag.substr(begin, end - begin + 1);
  std::transform(tag.begin(), tag.end(), tag.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return tag;
}

/// Prepared statement wrapper.
class Statement {
 public:
  Statement(sqlite3* db, const std::string& sql) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK) {
      stmt_ = nullptr;
    }
  }
  ~Statement() {
    if (stmt_ != nullptr) sqlite3_finalize(stmt_);
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  bool valid() const { return stmt_ != nullptr; }
  sqlite3_stmt* get() const { return stmt_; }

  void bindText(int index, const std::string& value) {
    sqlite3_bind_text(stmt_, index, value.c_str(), -1, SQLITE_TRANSIENT);
  }
  void bindInt(int index, int64_t value) { sqlite3_bind_int64(stmt_, index, value); }
  void bindDouble(int index, double value) { sqlite3_bind_double(stmt_, index, value); }
  void bindNull(int index) { sqlite3_bind_null(stmt_, index); }

  int step() { return sqlite3_step(stmt_); }

  std::string columnText(int column) const {
    const unsigned char* text = sqlite3_column_text(stmt_, column);
    return text != nullptr ? reinterpret_cast<const char*>(text) : "";
  }
  bool columnIsNull(int column) const {
    return sqlite3_column_type(stmt_, column) == SQLITE_NULL;
  }

 private:
  sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

// ---------------------------------------------------------------------------
// SampleDb
// ---------------------------------------------------------------------------

std::optional<SampleDb> SampleDb::open(const std::string& path, std::string* error) {
  sqlite3* handle = nullptr;
  if (sqlite3_open(path.c_str(), &handle) != SQLITE_OK) {
    if (error != nullptr) {
      *error = handle != nullptr ? sqlite3_errmsg(handle) : "cannot open database";
    }
    if (handle != nullptr) sqlite3_close(handle);
    return std::nullopt;
  }
  char* exec_error = nullptr;
  if (sqlite3_exec(handle, kSchemaSql, nullptr, nullptr, &exec_error) != SQLITE_OK) {
    if (error != nullptr && exec_error != nullptr) *error = exec_error;
    sqlite3_free(exec_error);
    sqlite3_close(handle);
    return std::nullopt;
  }
  return SampleDb(handle);
}

SampleDb::SampleDb(SampleDb&& other) noexcept : handle_(other.handle_) {
  other.handle_ = nullptr;
}

SampleDb& SampleDb::operator=(SampleDb&& other) noexcept {
  if (this != &other) {
    if (handle_ != nullptr) sqlite3_close(handle_);
    handle_ = other.handle_;
    other.handle_ = nullptr;
  }
  return *this;
}

SampleDb::~SampleDb() {
  if (handle_ != nullptr) sqlite3_close(handle_);
}

bool SampleDb::insertMidiRow(const MidiSampleRow& row, std::string* error) {
  Statement stmt(handle_,
                 "INSERT INTO midi_samples (path, content_type, length_bars, "
                 "key_root, mode, root_progression, note_count, source) "
                 "VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
  if (!stmt.valid()) {
    if (error != nullptr) *error = sqlite3_errmsg(handle_);
    return false;
  }
  stmt.bindText(1, row.path);
  stmt.bindText(2, toString(row.content_type));
  stmt.bindInt(3, row.length_bars);
  stmt.bindInt(4, row.key_root);
  stmt.bindText(5, toString(row.mode));
  if (row.root_progression) {
    stmt.bindText(6, encodeProgression(*row.root_progression));
  } else {
    stmt.bindNull(6);
  }
  stmt.bindInt(7, row.note_count);
  stmt.bindText(8, row.extracted_stem ? "extracted_stem" : "original");
  if (stmt.step() != SQLITE_DONE) {
    if (error != nullptr) *error = sqlite3_errmsg(handle_);
    return false;
  }
  return true;
}

bool SampleDb::insertAudioRow(const AudioSampleRow& row, std::string* error) {
  Statement stmt(handle_,
                 "INSERT INTO audio_samples (path, sample_type, keywords, "
                 "length_bars, source_bpm, duration_seconds) "
                 "VALUES (?, ?, ?, ?, ?, ?)");
  if (!stmt.valid()) {
    if (error != nullptr) *error = sqlite3_errmsg(handle_);
    return false;
  }
  stmt.bindText(1, row.path);
  stmt.bindText(2, toString(row.sample_type));
  stmt.bindText(3, joinKeywords(row.keywords));
  if (row.length_bars) {
    stmt.bindInt(4, *row.length_bars);
  } else {
    stmt.bindNull(4);
  }
  if (row.source_bpm) {
    stmt.bindDouble(5, *row.source_bpm);
  } else {
    stmt.bindNull(5);
  }
  stmt.bindDouble(6, row.duration_seconds);
  if (stmt.step() != SQLITE_DONE) {
    if (error != nullptr) *error = sqlite3_errmsg(handle_);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

IngestReport ingestMidiDir(const std::string& dir, SampleDb& db,
                           const std::string& stems_dir) {
  IngestReport report;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    report.ok = false;
    report.error = "not a readable directory: " + dir;
    return report;
  }

  const std::string stem_root =
      stems_dir.empty() ? dir + "/.stems" : stems_dir;

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".mid" || ext == ".midi") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  for (const fs::path& file : files) {
    auto bytes = readBinaryFile(file.string());
    if (!bytes) {
      report.skipped.push_back(file.string() + ": unreadable");
      continue;
    }
    SmfParseResult parsed = parseMidiFile(*bytes);
    if (!parsed.ok) {
      report.skipped.push_back(file.string() + ": " + parsed.error);
      continue;
    }
    if (parsed.clip.notes.empty()) {
      report.skipped.push_back(file.string() + ": no notes");
      continue;
    }

    const MidiFeatures features = analyzeFeatures(parsed.clip);
    MidiSampleRow row;
    row.path = fs::absolute(file).string();
    row.content_type = features.content_type;
    row.length_bars = features.length_bars;
    row.key_root = features.key_root;
    row.mode = features.mode;
    row.root_progression = features.root_progression;
    row.note_count = static_cast<int>(parsed.clip.notes.size());
    row.extracted_stem = false;
    std::string error;
    if (!db.insertMidiRow(row, &error)) {
      report.ok = false;
      report.error = error;
      return report;
    }
    ++report.rows_added;

    // Stems augment the database; the chord stem is the source itself and
    // is not re-inserted.
    for (auto& [stem_name, stem_clip] : extractStems(parsed.clip, features)) {
      if (stem_name == "chord" || stem_clip.notes.empty()) continue;
      fs::create_directories(stem_root, ec);
      const std::string stem_path =
          (fs::path(stem_root) / (file.stem().string() + "." + stem_name + ".mid"))
              .string();
      if (!writeBinaryFile(stem_path, writeMidiFile(stem_clip, 120.0))) {
        report.skipped.push_back(stem_path + ": cannot write stem file");
        continue;
      }

      const MidiFeatures stem_features = analyzeFeatures(stem_clip);
      MidiSampleRow stem_row;
      stem_row.path = fs::absolute(stem_path).string();
      stem_row.content_type = stem_name == "bass" ? MidiContentType::Bass
                                                  : MidiContentType::Melody;
      stem_row.length_bars = stem_features.length_bars;
      stem_row.key_root = stem_features.key_root;
      stem_row.mode = stem_features.mode;
      // The bass stem is the source chord's root line; it keeps the source
      // progression so progression-constrained bass specs can bind to it.
      if (stem_name == "bass") {
        stem_row.root_progression = features.root_progression;
      }
      stem_row.note_count = static_cast<int>(stem_clip.notes.size());
      stem_row.extracted_stem = true;
      if (!db.insertMidiRow(stem_row, &error)) {
        report.ok = false;
        report.error = error;
        return report;
      }
      ++report.rows_added;
    }
  }
  return report;
}

IngestReport ingestAudioDir(const std::string& dir, const std::string& manifest_path,
                            SampleDb& db) {
  IngestReport report;
  auto manifest = readTextFile(manifest_path);
  if (!manifest) {
    report.ok = false;
    report.error = "cannot read manifest: " + manifest_path;
    return report;
  }

  std::istringstream lines(*manifest);
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::istringstream fields_in(line);
    std::string field;
    while (std::getline(fields_in, field, '\t')) fields.push_back(field);

    const std::string where = "line " + std::to_string(line_number);
    if (fields.size() < 3) {
      report.skipped.push_back(where + ": expected path, type, keywords");
      continue;
    }

    AudioSampleRow row;
    const fs::path file = fs::path(dir) / fields[0];
    std::error_code ec;
    if (!fs::is_regular_file(file, ec)) {
      report.skipped.push_back(where + ": missing file " + file.string());
      continue;
    }
    row.path = fs::absolute(file).string();

    auto type = parseAudioSampleType(fields[1]);
    if (!type) {
      report.skipped.push_back(where + ": unknown sample type " + fields[1]);
      continue;
    }
    row.sample_type = *type;

    std::istringstream keywords_in(fields[2]);
    std::string tag;
    while (std::getline(keywords_in, tag, ',')) {
      const std::string normalized = normalizeTag(tag);
      if (!normalized.empty()) row.keywords.push_back(normalized);
    }
    if (row.keywords.empty()) {
      report.skipped.push_back(where + ": no keywords");
      continue;
    }

    if (row.sample_type == AudioSampleType::Loop) {
      if (fields.size() < 5) {
        report.skipped.push_back(where + ": loops need length_bars and source_bpm");
        continue;
      }
      try {
        row.length_bars = std::stoi(fields[3]);
        row.source_bpm = std::stod(fields[4]);
      } catch (const std::exception&) {
        report.skipped.push_back(where + ": bad loop metadata");
        continue;
      }
      if (*row.source_bpm <= 0.0) {
        report.skipped.push_back(where + ": source_bpm must be positive");
        continue;
      }
    }

    auto wav = readWavFile(row.path);
    if (!wav) {
      report.skipped.push_back(where + ": unsupported audio format " + row.path);
      continue;
    }
    row.duration_seconds = wav->durationSeconds();

    std::string error;
    if (!db.insertAudioRow(row, &error)) {
      report.ok = false;
      report.error = error;
      return report;
    }
    ++report.rows_added;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

std::vector<MidiSampleRow> queryMidi(const MidiClipSpec& spec, const SampleDb& db) {
  std::string sql =
      "SELECT id, path, content_type, length_bars, key_root, mode, "
      "root_progression, note_count, source FROM midi_samples "
      "WHERE content_type = ? AND length_bars = ?";
  if (spec.key_root) sql += " AND key_root = ?";
  if (spec.mode) sql += " AND mode = ?";
  if (spec.root_progression) sql += " AND root_progression = ?";
  sql += " ORDER BY path, id";

  Statement stmt(db.handle(), sql);
  if (!stmt.valid()) return {};
  int index = 1;
  stmt.bindText(index++, toString(spec.content_type));
  stmt.bindInt(index++, spec.length_bars);
  if (spec.key_root) stmt.bindInt(index++, *spec.key_root);
  if (spec.mode) stmt.bindText(index++, toString(*spec.mode));
  if (spec.root_progression) {
    stmt.bindText(index++, encodeProgression(*spec.root_progression));
  }

  std::vector<MidiSampleRow> rows;
  while (stmt.step() == SQLITE_ROW) {
    MidiSampleRow row;
    row.id = sqlite3_column_int64(stmt.get(), 0);
    row.path = stmt.columnText(1);
    row.content_type =
        parseMidiContentType(stmt.columnText(2)).value_or(MidiContentType::Chord);
    row.length_bars = sqlite3_column_int(stmt.get(), 3);
    row.key_root = sqlite3_column_int(stmt.get(), 4);
    row.mode = parseKeyMode(stmt.columnText(5)).value_or(KeyMode::Major);
    if (!stmt.columnIsNull(6)) {
      row.root_progression = decodeProgression(stmt.columnText(6));
    }
    row.note_count = sqlite3_column_int(stmt.get(), 7);
    row.extracted_stem = stmt.columnText(8) == "extracted_stem";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AudioSampleRow> queryAudio(const AudioClipSpec& spec, const SampleDb& db) {
  std::string sql =
      "SELECT id, path, sample_type, keywords, length_bars, source_bpm, "
      "duration_seconds FROM audio_samples WHERE sample_type = ?";
  if (spec.sample_type == AudioSampleType::Loop && spec.length_bars) {
    sql += " AND length_bars = ?";
  }
  sql += " ORDER BY path, id";

  Statement stmt(db.handle(), sql);
  if (!stmt.valid()) return {};
  int index = 1;
  stmt.bindText(index++, toString(spec.sample_type));
  if (spec.sample_type == AudioSampleType::Loop && spec.length_bars) {
    stmt.bindInt(index++, *spec.length_bars);
  }

  std::vector<std::string> wanted;
  for (const std::string& keyword : spec.keywords) {
    wanted.push_back(normalizeTag(keyword));
  }

  std::vector<AudioSampleRow> rows;
  while (stmt.step() == SQLITE_ROW) {
    AudioSampleRow row;
    row.id = sqlite3_column_int64(stmt.get(), 0);
    row.path = stmt.columnText(1);
    row.sample_type =
        parseAudioSampleType(stmt.columnText(2)).value_or(AudioSampleType::Loop);
    row.keywords = splitKeywords(stmt.columnText(3));
    if (!stmt.columnIsNull(4)) row.length_bars = sqlite3_column_int(stmt.get(), 4);
    if (!stmt.columnIsNull(5)) row.source_bpm = sqlite3_column_double(stmt.get(), 5);
    row.duration_seconds = sqlite3_column_double(stmt.get(), 6);

    // AND semantics: every spec keyword must appear on the row.
    bool superset = true;
    for (const std::string& keyword : wanted) {
      if (std::find(row.keywords.begin(), row.keywords.end(), keyword) ==
          row.keywords.end()) {
        superset = false;
        break;
      }
    }
    if (superset) rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Retrieval
// ---------------------------------------------------------------------------

ResolvedDocument retrieve(const TomiDocument& doc, const SampleDb& midi_db,
                          const SampleDb& audio_db, uint64_t seed) {
  ResolvedDocument resolved;
  resolved.doc = doc;

  // Clips referenced by at least one link, in deterministic (map) order.
  std::vector<std::string> linked_clips;
  for (const auto& [name, clip] : doc.clips) {
    for (const CompositionLink& link : doc.links) {
      if (link.clip_ref == name) {
        linked_clips.push_back(name);
        break;
      }
    }
  }

  for (const std::string& name : linked_clips) {
    const ClipSpec& spec = doc.clips.at(name);
    Rng rng = seededFor(seed, name);
    if (const auto* midi = std::get_if<MidiClipSpec>(&spec)) {
      std::vector<MidiSampleRow> rows = queryMidi(*midi, midi_db);
      if (rows.empty()) {
        resolved.discarded_clips.push_back(name);
      } else {
        const size_t pick = static_cast<size_t>(
            rng.uniformInt(0, static_cast<int64_t>(rows.size()) - 1));
        resolved.bindings.emplace(name, rows[pick]);
      }
    } else {
      const auto& audio = std::get<AudioClipSpec>(spec);
      std::vector<AudioSampleRow> rows = queryAudio(audio, audio_db);
      if (rows.empty()) {
        resolved.discarded_clips.push_back(name);
      } else {
        const size_t pick = static_cast<size_t>(
            rng.uniformInt(0, static_cast<int64_t>(rows.size()) - 1));
        resolved.bindings.emplace(name, rows[pick]);
      }
    }
  }

  for (size_t i = 0; i < doc.links.size(); ++i) {
    const std::string& clip = doc.links[i].clip_ref;
    if (std::find(resolved.discarded_clips.begin(), resolved.discarded_clips.end(),
                  clip) != resolved.discarded_clips.end()) {
      resolved.discarded_links.push_back(i);
    }
  }
  return resolved;
}

}  // namespace tomi
