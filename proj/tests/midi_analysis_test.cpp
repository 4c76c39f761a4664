// Key estimation, content classification, feature analysis, and stem
// extraction. Expected keys come from an independent profile-correlation
// oracle computed inside the test.

#include "tomi/midi/analysis.h"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "testing/fixtures.h"

namespace tomi {
namespace {

// Independent Krumhansl-Schmuckler oracle: duration-weighted pitch-class
// histogram correlated against the rotated profiles, explicit argmax with
// the documented tie-break.
std::pair<int, KeyMode> oracleKey(const std::vector<NoteEvent>& notes) {
  static constexpr std::array<double, 12> kMajor = {
      6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88};
  static constexpr std::array<double, 12> kMinor = {
      6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17};

  std::array<double, 12> histogram{};
  for (const NoteEvent& note : notes) {
    histogram[static_cast<size_t>(((note.pitch % 12) + 12) % 12)] +=
        static_cast<double>(note.duration_ticks);
  }

  auto correlation = [&](const std::array<double, 12>& profile, int root) {
    double mean_h = 0.0;
    double mean_p = 0.0;
    for (int i = 0; i < 12; ++i) {
      mean_h += histogram[static_cast<size_t>(i)];
      mean_p += profile[static_cast<size_t>(i)];
    }
    mean_h /= 12.0;
    mean_p /= 12.0;
    double cov = 0.0;
    double var_h = 0.0;
    double var_p = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double dh = histogram[static_cast<size_t>(i)] - mean_h;
      const double dp = profile[static_cast<size_t>(((i - root) % 12 + 12) % 12)] -
                        mean_p;
      cov += dh * dp;
      var_h += dh * dh;
      const double dpp = profile[static_cast<size_t>(i)] - mean_p;
      var_p += dpp * dpp;
    }
    return var_h > 0.0 && var_p > 0.0 ? cov / std::sqrt(var_h * var_p) : 0.0;
  };

  double best = -2.0;
  int best_root = 0;
  KeyMode best_mode = KeyMode::Major;
  for (int mode = 0; mode < 2; ++mode) {
    for (int root = 0; root < 12; ++root) {
      const double score =
          correlation(mode == 0 ? kMajor : kMinor, root);
      if (score > best) {
        best = score;
        best_root = root;
        best_mode = mode == 0 ? KeyMode::Major : KeyMode::Minor;
      }
    }
  }
  return {best_root, best_mode};
}

std::vector<NoteEvent> scaleNotes(std::initializer_list<int> pitches) {
  std::vector<NoteEvent> notes;
  int64_t onset = 0;
  for (int pitch : pitches) {
    notes.push_back({pitch, 90, onset, kTicksPerQuarter});
    onset += kTicksPerQuarter;
  }
  return notes;
}

TEST(EstimateKey, CMajorScale) {
  const auto notes =
      scaleNotes({60, 62, 64, 65, 67, 69, 71, 72});  // ascending C major
  EXPECT_EQ(oracleKey(notes), (std::pair<int, KeyMode>{0, KeyMode::Major}));
  EXPECT_EQ(estimateKey(notes), (std::pair<int, KeyMode>{0, KeyMode::Major}));
}

TEST(EstimateKey, ANaturalMinorScale) {
  const auto notes = scaleNotes({57, 59, 60, 62, 64, 65, 67, 69});
  EXPECT_EQ(oracleKey(notes), (std::pair<int, KeyMode>{9, KeyMode::Minor}));
  EXPECT_EQ(estimateKey(notes), (std::pair<int, KeyMode>{9, KeyMode::Minor}));
}

TEST(EstimateKey, SingleNoteFavorsMajorOnTonic) {
  const auto notes = scaleNotes({60});
  EXPECT_EQ(estimateKey(notes), (std::pair<int, KeyMode>{0, KeyMode::Major}));
  EXPECT_EQ(estimateKey(notes), oracleKey(notes));
}

TEST(EstimateKey, EmptyInputThrows) {
  EXPECT_THROW(estimateKey({}), std::invalid_argument);
}

// Transposition covariance: shifting every pitch by t rotates the key
// root by t mod 12 and keeps the mode.
TEST(EstimateKey, TranspositionCovariance) {
  const MidiClipData clip = testing::chordProgressionClip();
  const auto [root, mode] = estimateKey(clip.notes);
  for (int t : {1, 3, 5, 7, 11}) {
    std::vector<NoteEvent> shifted = clip.notes;
    for (NoteEvent& note : shifted) note.pitch += t;
    const auto [shifted_root, shifted_mode] = estimateKey(shifted);
    EXPECT_EQ(shifted_root, (root + t) % 12) << "t=" << t;
    EXPECT_EQ(shifted_mode, mode) << "t=" << t;
  }
}

TEST(Classify, BackToBackChordsAreChord) {
  EXPECT_EQ(classifyContentType(testing::chordProgressionClip().notes),
            MidiContentType::Chord);
}

TEST(Classify, LowMonophonicLineIsBass) {
  EXPECT_EQ(classifyContentType(testing::bassLineClip().notes),
            MidiContentType::Bass);
}

TEST(Classify, RepeatingCycleIsArpeggio) {
  EXPECT_EQ(classifyContentType(testing::arpeggioClip().notes),
            MidiContentType::Arpeggio);
}

TEST(Classify, ContourWithoutCycleIsMelody) {
  EXPECT_EQ(classifyContentType(testing::melodyClip().notes),
            MidiContentType::Melody);
}

TEST(Classify, EmptyThrows) {
  EXPECT_THROW(classifyContentType({}), std::invalid_argument);
}

// Classification totality over random clips: exactly one bucket, never a
// throw on non-empty input.
TEST(Classify, TotalOverRandomClips) {
  for (uint64_t seed = 300; seed < 360; ++seed) {
    const MidiClipData clip = testing::randomClip(seed);
    const MidiContentType type = classifyContentType(clip.notes);
    EXPECT_TRUE(type == MidiContentType::Chord || type == MidiContentType::Bass ||
                type == MidiContentType::Melody ||
                type == MidiContentType::Arpeggio);
  }
}

TEST(AnalyzeFeatures, ChordProgressionFixture) {
  const MidiClipData clip = testing::chordProgressionClip();
  const MidiFeatures features = analyzeFeatures(clip);
  EXPECT_EQ(features.content_type, MidiContentType::Chord);
  EXPECT_EQ(features.key_root, 0);
  EXPECT_EQ(features.mode, KeyMode::Major);
  EXPECT_EQ(features.length_bars, 4);
  ASSERT_TRUE(features.root_progression.has_value());
  EXPECT_EQ(*features.root_progression, (std::vector<int>{1, 6, 4, 5}));
}

TEST(AnalyzeFeatures, BassLineHasNoProgression) {
  const MidiFeatures features = analyzeFeatures(testing::bassLineClip(8));
  EXPECT_EQ(features.content_type, MidiContentType::Bass);
  EXPECT_EQ(features.length_bars, 8);
  EXPECT_FALSE(features.root_progression.has_value());
}

TEST(AnalyzeFeatures, SixteenBarMelody) {
  const MidiFeatures features = analyzeFeatures(testing::melodyClip(16));
  EXPECT_EQ(features.length_bars, 16);
}

TEST(ExtractStems, ChordProgressionBassStem) {
  const MidiClipData clip = testing::chordProgressionClip();
  const MidiFeatures features = analyzeFeatures(clip);
  auto stems = extractStems(clip, features);
  ASSERT_TRUE(stems.contains("bass"));
  ASSERT_TRUE(stems.contains("melody"));
  ASSERT_TRUE(stems.contains("chord"));

  const MidiClipData& bass = stems.at("bass");
  ASSERT_EQ(bass.notes.size(), 4u);
  EXPECT_EQ(bass.notes[0].pitch, 48);  // C
  EXPECT_EQ(bass.notes[1].pitch, 45);  // A
  EXPECT_EQ(bass.notes[2].pitch, 41);  // F
  EXPECT_EQ(bass.notes[3].pitch, 43);  // G

  const MidiClipData& melody = stems.at("melody");
  ASSERT_EQ(melody.notes.size(), 4u);
  EXPECT_EQ(melody.notes[0].pitch, 67);  // highest chord tone

  EXPECT_EQ(stems.at("chord").notes, clip.notes);
}

TEST(ExtractStems, MonophonicInputYieldsNothing) {
  const MidiClipData clip = testing::bassLineClip();
  EXPECT_TRUE(extractStems(clip, analyzeFeatures(clip)).empty());
}

TEST(ExtractStems, SingleChordYieldsOneNoteStem) {
  MidiClipData clip;
  clip.notes.push_back({60, 96, 0, kTicksPerBar});
  clip.notes.push_back({64, 96, 0, kTicksPerBar});
  clip.notes.push_back({67, 96, 0, kTicksPerBar});
  finalizeClip(clip);
  auto stems = extractStems(clip, analyzeFeatures(clip));
  ASSERT_TRUE(stems.contains("bass"));
  EXPECT_EQ(stems.at("bass").notes.size(), 1u);
}

// Stem soundness: every stem note's (onset, pitch) pair exists among the
// source pitches sounding at that time.
TEST(ExtractStems, StemNotesComeFromSource) {
  for (uint64_t seed = 500; seed < 520; ++seed) {
    MidiClipData clip = testing::randomClip(seed, 30);
    MidiFeatures features;
    try {
      features = analyzeFeatures(clip);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (features.content_type != MidiContentType::Chord) continue;
    for (const auto& [stem_name, stem] : extractStems(clip, features)) {
      if (stem_name == "chord") continue;
      for (const NoteEvent& note : stem.notes) {
        bool found = false;
        for (const NoteEvent& source : clip.notes) {
          if (source.onset_ticks <= note.onset_ticks &&
              note.onset_ticks < source.onset_ticks + source.duration_ticks &&
              (source.pitch % 12) == (note.pitch % 12)) {
            found = true;
            break;
          }
        }
        EXPECT_TRUE(found) << stem_name << " seed " << seed;
      }
    }
  }
}

TEST(ScaleDegree, DiatonicMapping) {
  EXPECT_EQ(scaleDegree(0, 0, KeyMode::Major), 1);
  EXPECT_EQ(scaleDegree(9, 0, KeyMode::Major), 6);
  EXPECT_EQ(scaleDegree(5, 0, KeyMode::Major), 4);
  EXPECT_EQ(scaleDegree(7, 0, KeyMode::Major), 5);
  EXPECT_EQ(scaleDegree(3, 0, KeyMode::Minor), 3);  // minor third
  EXPECT_EQ(scaleDegree(0, 9, KeyMode::Minor), 3);  // C relative to A minor
}

}  // namespace
}  // namespace tomi
