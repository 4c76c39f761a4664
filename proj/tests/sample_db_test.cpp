// Ingestion, attribute queries, and seeded retrieval with discard-on-miss.

#include "tomi/db/sample_db.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "testing/fixtures.h"
#include "tomi/util/file_io.h"

namespace tomi {
namespace {

namespace fs = std::filesystem;

class SampleDbTest : public ::testing::Test {
 protected:
  testing::ScratchDir dir_;
};

TEST_F(SampleDbTest, IngestChordFileAddsStems) {
  fs::create_directories(dir_.file("midi"));
  writeBinaryFile(dir_.file("midi/chords.mid"),
                  writeMidiFile(testing::chordProgressionClip(), 120.0));
  auto db = SampleDb::open(dir_.file("midi.db"));
  ASSERT_TRUE(db.has_value());

  IngestReport report = ingestMidiDir(dir_.file("midi"), *db);
  ASSERT_TRUE(report.ok) << report.error;
  // Original chord row + bass stem + melody stem.
  EXPECT_EQ(report.rows_added, 3);

  MidiClipSpec bass_spec;
  bass_spec.content_type = MidiContentType::Bass;
  bass_spec.length_bars = 4;
  auto bass_rows = queryMidi(bass_spec, *db);
  ASSERT_EQ(bass_rows.size(), 1u);
  EXPECT_TRUE(bass_rows[0].extracted_stem);
  // The bass stem keeps the source chord progression.
  ASSERT_TRUE(bass_rows[0].root_progression.has_value());
  EXPECT_EQ(*bass_rows[0].root_progression, (std::vector<int>{1, 6, 4, 5}));
  EXPECT_TRUE(fs::exists(bass_rows[0].path));
}

TEST_F(SampleDbTest, EmptyDirectoryAddsNothing) {
  fs::create_directories(dir_.file("empty"));
  auto db = SampleDb::open(dir_.file("midi.db"));
  IngestReport report = ingestMidiDir(dir_.file("empty"), *db);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.rows_added, 0);
}

TEST_F(SampleDbTest, NoteLessFileSkipped) {
  fs::create_directories(dir_.file("midi"));
  writeBinaryFile(dir_.file("midi/empty.mid"),
                  writeMidiFile(MidiClipData{}, 120.0));
  auto db = SampleDb::open(dir_.file("midi.db"));
  IngestReport report = ingestMidiDir(dir_.file("midi"), *db);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.rows_added, 0);
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_NE(report.skipped[0].find("no notes"), std::string::npos);
}

TEST_F(SampleDbTest, AudioManifestIngestion) {
  fs::create_directories(dir_.file("audio"));
  writeWavPcm16(dir_.file("audio/a.wav"), testing::toneBuffer(220.0, 4.0));
  writeWavPcm16(dir_.file("audio/b.wav"), testing::toneBuffer(330.0, 8.0));
  writeWavPcm16(dir_.file("audio/kick.wav"), testing::noiseBurstBuffer(1, 0.3));
  writeWavPcm16(dir_.file("audio/snare.wav"), testing::noiseBurstBuffer(2, 0.2));
  writeWavPcm16(dir_.file("audio/crash.wav"), testing::noiseBurstBuffer(3, 0.5));
  // 2 loops + 3 one-shots; keyword case and spacing are normalized.
  writeTextFile(dir_.file("manifest.tsv"),
                "a.wav\tloop\tPad, Synth\t2\t120\n"
                "b.wav\tloop\tpluck\t4\t126\n"
                "kick.wav\tone_shot\tKick, PUNCHY\n"
                "snare.wav\tone_shot\tsnare\n"
                "crash.wav\tone_shot\tcrash\n");

  auto db = SampleDb::open(dir_.file("audio.db"));
  IngestReport report = ingestAudioDir(dir_.file("audio"), dir_.file("manifest.tsv"), *db);
  ASSERT_TRUE(report.ok) << report.error;
  EXPECT_EQ(report.rows_added, 5);
  EXPECT_TRUE(report.skipped.empty());

  AudioClipSpec kick_spec;
  kick_spec.sample_type = AudioSampleType::OneShot;
  kick_spec.keywords = {"kick"};
  auto rows = queryAudio(kick_spec, *db);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].keywords, (std::vector<std::string>{"kick", "punchy"}));
  EXPECT_NEAR(rows[0].duration_seconds, 0.3, 1e-6);
}

TEST_F(SampleDbTest, LoopWithoutBpmRejected) {
  fs::create_directories(dir_.file("audio"));
  writeWavPcm16(dir_.file("audio/a.wav"), testing::toneBuffer(220.0, 4.0));
  writeTextFile(dir_.file("manifest.tsv"), "a.wav\tloop\tpad\n");
  auto db = SampleDb::open(dir_.file("audio.db"));
  IngestReport report = ingestAudioDir(dir_.file("audio"), dir_.file("manifest.tsv"), *db);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.rows_added, 0);
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_NE(report.skipped[0].find("source_bpm"), std::string::npos);
}

TEST_F(SampleDbTest, MissingFileReportedAndSkipped) {
  fs::create_directories(dir_.file("audio"));
  writeTextFile(dir_.file("manifest.tsv"), "ghost.wav\tone_shot\tkick\n");
  auto db = SampleDb::open(dir_.file("audio.db"));
  IngestReport report = ingestAudioDir(dir_.file("audio"), dir_.file("manifest.tsv"), *db);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.rows_added, 0);
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_NE(report.skipped[0].find("missing file"), std::string::npos);
}

class FixtureDbTest : public ::testing::Test {
 protected:
  FixtureDbTest() : library_(testing::buildFixtureLibrary(dir_)) {
    midi_db_ = SampleDb::open(library_.midi_db_path);
    audio_db_ = SampleDb::open(library_.audio_db_path);
  }

  testing::ScratchDir dir_;
  testing::FixtureLibrary library_;
  std::optional<SampleDb> midi_db_;
  std::optional<SampleDb> audio_db_;
};

TEST_F(FixtureDbTest, QueryMidiMatchesAllPresentAttributes) {
  MidiClipSpec spec;
  spec.content_type = MidiContentType::Chord;
  spec.length_bars = 8;
  const auto rows = queryMidi(spec, *midi_db_);
  // Hand-enumerated fixture census: five 8-bar chord files (one per
  // progression); the 4-bar chords, stems, and other content must not
  // leak in.
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.content_type, MidiContentType::Chord);
    EXPECT_EQ(row.length_bars, 8);
    EXPECT_FALSE(row.extracted_stem);
  }
  // Deterministic path ordering.
  for (size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i - 1].path, rows[i].path);
  }
}

TEST_F(FixtureDbTest, QueryMidiProgressionExactMatch) {
  MidiClipSpec spec;
  spec.content_type = MidiContentType::Chord;
  spec.length_bars = 4;
  spec.root_progression = std::vector<int>{1, 6, 4, 5};
  const auto rows = queryMidi(spec, *midi_db_);
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    ASSERT_TRUE(row.root_progression.has_value());
    EXPECT_EQ(*row.root_progression, *spec.root_progression);
  }

  spec.root_progression = std::vector<int>{7, 7, 7, 7};
  EXPECT_TRUE(queryMidi(spec, *midi_db_).empty());
}

TEST_F(FixtureDbTest, QueryMidiNoMatchGivesEmpty) {
  MidiClipSpec spec;
  spec.content_type = MidiContentType::Bass;
  spec.length_bars = 4;
  spec.key_root = 1;  // fixtures are C-rooted
  spec.mode = KeyMode::Minor;
  EXPECT_TRUE(queryMidi(spec, *midi_db_).empty());
}

TEST_F(FixtureDbTest, KeywordSupersetSemantics) {
  AudioClipSpec spec;
  spec.sample_type = AudioSampleType::OneShot;
  spec.keywords = {"kick"};
  EXPECT_EQ(queryAudio(spec, *audio_db_).size(), 1u);  // {kick,punchy} matches

  spec.keywords = {"kick", "vinyl"};
  EXPECT_TRUE(queryAudio(spec, *audio_db_).empty());  // AND semantics

  AudioClipSpec loop_spec;
  loop_spec.sample_type = AudioSampleType::Loop;
  loop_spec.keywords = {"pad"};
  loop_spec.length_bars = 8;
  const auto rows = queryAudio(loop_spec, *audio_db_);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].length_bars, 8);  // exact length rule
}

// Query soundness: every returned row satisfies an independent predicate
// applied to all rows.
TEST_F(FixtureDbTest, QuerySoundness) {
  AudioClipSpec all_loops;
  all_loops.sample_type = AudioSampleType::Loop;
  all_loops.keywords = {};
  const auto universe = queryAudio(all_loops, *audio_db_);

  AudioClipSpec spec;
  spec.sample_type = AudioSampleType::Loop;
  spec.keywords = {"synth"};
  spec.length_bars = 4;
  const auto rows = queryAudio(spec, *audio_db_);

  auto satisfies = [&](const AudioSampleRow& row) {
    if (row.sample_type != AudioSampleType::Loop) return false;
    if (!row.length_bars || *row.length_bars != 4) return false;
    for (const std::string& keyword : spec.keywords) {
      if (std::find(row.keywords.begin(), row.keywords.end(), keyword) ==
          row.keywords.end()) {
        return false;
      }
    }
    return true;
  };

  size_t expected = 0;
  for (const auto& row : universe) {
    if (satisfies(row)) ++expected;
  }
  EXPECT_EQ(rows.size(), expected);
  for (const auto& row : rows) EXPECT_TRUE(satisfies(row));
}

TEST_F(FixtureDbTest, RetrieveBindsEverythingMatchable) {
  const TomiDocument doc = testing::exampleSongDoc();
  ResolvedDocument resolved = retrieve(doc, *midi_db_, *audio_db_, 7);
  EXPECT_TRUE(resolved.discarded_clips.empty());
  EXPECT_TRUE(resolved.discarded_links.empty());
  EXPECT_EQ(resolved.bindings.size(), 3u);
}

TEST_F(FixtureDbTest, RetrieveDiscardsUnmatchableClipAndItsLinks) {
  TomiDocument doc = testing::exampleSongDoc();
  auto& clip = std::get<AudioClipSpec>(doc.clips.at("c2"));
  clip.keywords = {"nonexistent_tag"};
  // c2 referenced by two links now.
  doc.links.push_back({"s2", "t2", "c2", "f2"});

  ResolvedDocument resolved = retrieve(doc, *midi_db_, *audio_db_, 7);
  ASSERT_EQ(resolved.discarded_clips.size(), 1u);
  EXPECT_EQ(resolved.discarded_clips[0], "c2");
  EXPECT_EQ(resolved.discarded_links.size(), 2u);

  // Partition: bound + discarded covers exactly the linked clips.
  EXPECT_EQ(resolved.bindings.size() + resolved.discarded_clips.size(), 3u);
}

TEST_F(FixtureDbTest, RetrieveIsSeedStable) {
  const TomiDocument doc = testing::exampleSongDoc();
  const ResolvedDocument a = retrieve(doc, *midi_db_, *audio_db_, 42);
  const ResolvedDocument b = retrieve(doc, *midi_db_, *audio_db_, 42);
  EXPECT_EQ(a.bindings, b.bindings);
  EXPECT_EQ(a.discarded_clips, b.discarded_clips);
  EXPECT_EQ(a.discarded_links, b.discarded_links);
}

TEST_F(FixtureDbTest, UnrelatedClipDoesNotDisturbBindings) {
  TomiDocument doc = testing::exampleSongDoc();
  const ResolvedDocument before = retrieve(doc, *midi_db_, *audio_db_, 9);

  AudioClipSpec extra;
  extra.name = "extra_hat";
  extra.sample_type = AudioSampleType::OneShot;
  extra.keywords = {"hat"};
  doc.clips.emplace(extra.name, ClipSpec{extra});
  doc.links.push_back({"s3", "t2", "extra_hat", "f2"});

  const ResolvedDocument after = retrieve(doc, *midi_db_, *audio_db_, 9);
  for (const auto& [name, binding] : before.bindings) {
    ASSERT_TRUE(after.bindings.contains(name));
    EXPECT_EQ(after.bindings.at(name), binding) << name;
  }
}

}  // namespace
}  // namespace tomi
