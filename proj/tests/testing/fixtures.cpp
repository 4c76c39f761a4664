#include "testing/fixtures.h"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "tomi/util/file_io.h"

namespace fs = std::filesystem;

namespace tomi::testing {

namespace {

std::atomic<int> g_scratch_counter{0};

}  // namespace

ScratchDir::ScratchDir() {
  const int id = g_scratch_counter.fetch_add(1);
  path_ = fs::temp_directory_path() /
          ("tomi_test_" + std::to_string(::getpid()) + "_" + std::to_string(id));
  fs::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

TomiDocument minimalDoc() {
  TomiDocument doc;
  doc.tempo_bpm = 120.0;
  doc.key = {0, KeyMode::Minor};
  doc.sections.emplace("verse_1",
                       SectionNode{"verse_1", PhraseLabel::Verse, 8});
  doc.tracks.emplace("chords", TrackNode{"chords", TrackKind::Midi});
  MidiClipSpec clip;
  clip.name = "chords_main";
  clip.content_type = MidiContentType::Chord;
  clip.length_bars = 8;
  doc.clips.emplace(clip.name, ClipSpec{clip});
  doc.transforms.emplace(
      "hold", TransformationNode{"hold", TransformSubclass::General,
                                 *parseActionSequence("OSSSSSSSSSSSSSSS"),
                                 LoopMode::Loop, std::nullopt});
  doc.section_sequence = {"verse_1"};
  doc.links.push_back({"verse_1", "chords", "chords_main", "hold"});
  return doc;
}

TomiDocument exampleSongDoc() {
  TomiDocument doc;
  doc.tempo_bpm = 120.0;
  doc.key = {0, KeyMode::Minor};
  doc.sections.emplace("s1", SectionNode{"s1", PhraseLabel::Intro, 8});
  doc.sections.emplace("s2", SectionNode{"s2", PhraseLabel::Verse, 16});
  doc.sections.emplace("s3", SectionNode{"s3", PhraseLabel::Chorus, 16});
  doc.sections.emplace("s4", SectionNode{"s4", PhraseLabel::Outro, 8});
  doc.tracks.emplace("t1", TrackNode{"t1", TrackKind::Midi});
  doc.tracks.emplace("t2", TrackNode{"t2", TrackKind::Audio});
  doc.tracks.emplace("t3", TrackNode{"t3", TrackKind::Audio});

  MidiClipSpec c1;
  c1.name = "c1";
  c1.content_type = MidiContentType::Chord;
  c1.length_bars = 8;
  c1.root_progression = std::vector<int>{1, 6, 4, 5};
  doc.clips.emplace("c1", ClipSpec{c1});

  AudioClipSpec c2;
  c2.name = "c2";
  c2.sample_type = AudioSampleType::OneShot;
  c2.keywords = {"kick"};
  doc.clips.emplace("c2", ClipSpec{c2});

  AudioClipSpec c3;
  c3.name = "c3";
  c3.sample_type = AudioSampleType::OneShot;
  c3.keywords = {"riser"};
  doc.clips.emplace("c3", ClipSpec{c3});

  doc.transforms.emplace(
      "f1", TransformationNode{"f1", TransformSubclass::General,
                               *parseActionSequence("OSSSOSSSOSSSOSSS"),
                               LoopMode::Loop, std::nullopt});
  doc.transforms.emplace(
      "f2", TransformationNode{"f2", TransformSubclass::Drum,
                               *parseActionSequence("ORRRORRRORRRORRR"),
                               LoopMode::Loop, std::nullopt});
  doc.transforms.emplace(
      "f3", TransformationNode{"f3", TransformSubclass::Fx, {},
                               LoopMode::Once, FxAlignment::Right});

  doc.section_sequence = {"s1", "s2", "s3", "s2"};
  doc.links.push_back({"s2", "t1", "c1", "f1"});
  doc.links.push_back({"s3", "t2", "c2", "f2"});
  doc.links.push_back({"s1", "t3", "c3", "f3"});
  // s4 is declared but unused; the validator reports it as an orphan
  // warning, which keeps the fixture handy for warning-path tests.
  return doc;
}

TomiDocument randomValidDoc(uint64_t seed, int n_sections, int n_tracks) {
  Rng rng(seed);
  TomiDocument doc;
  doc.tempo_bpm = 80.0 + static_cast<double>(rng.uniformInt(0, 140));
  doc.key = {static_cast<int>(rng.uniformInt(0, 11)),
             rng.chance(0.5) ? KeyMode::Major : KeyMode::Minor};

  static constexpr PhraseLabel kLabels[] = {
      PhraseLabel::Intro,  PhraseLabel::Verse,  PhraseLabel::PreChorus,
      PhraseLabel::Chorus, PhraseLabel::Bridge, PhraseLabel::Outro};

  std::vector<std::string> section_names;
  for (int i = 0; i < n_sections; ++i) {
    SectionNode section;
    section.name = "sec_" + std::to_string(i);
    section.label = kLabels[rng.uniformInt(0, 5)];
    section.length_bars = static_cast<int>(rng.uniformInt(4, 16));
    section_names.push_back(section.name);
    doc.sections.emplace(section.name, section);
  }
  for (const std::string& name : section_names) {
    doc.section_sequence.push_back(name);
    if (rng.chance(0.3)) doc.section_sequence.push_back(name);  // repeats
  }

  // Transform palette.
  auto randomSequence = [&rng]() {
    std::string text = "O";
    const int steps = static_cast<int>(rng.uniformInt(3, 15));
    bool sounding = true;
    for (int i = 0; i < steps; ++i) {
      const int roll = static_cast<int>(rng.uniformInt(0, 2));
      if (roll == 0) {
        text += 'O';
        sounding = true;
      } else if (roll == 1 && sounding) {
        text += 'S';
      } else {
        text += 'R';
        sounding = false;
      }
    }
    return *parseActionSequence(text);
  };
  const std::vector<std::string> transform_names = {"tg_a", "tg_b", "td_a", "tf_a"};
  doc.transforms.emplace(
      "tg_a", TransformationNode{"tg_a", TransformSubclass::General,
                                 randomSequence(), LoopMode::Loop, std::nullopt});
  doc.transforms.emplace(
      "tg_b", TransformationNode{"tg_b", TransformSubclass::General,
                                 randomSequence(), LoopMode::Once, std::nullopt});
  doc.transforms.emplace(
      "td_a", TransformationNode{"td_a", TransformSubclass::Drum,
                                 randomSequence(), LoopMode::Loop, std::nullopt});
  doc.transforms.emplace(
      "tf_a", TransformationNode{"tf_a", TransformSubclass::Fx, {},
                                 rng.chance(0.5) ? LoopMode::Once : LoopMode::Trim,
                                 rng.chance(0.5) ? FxAlignment::Left
                                                 : FxAlignment::Right});

  static constexpr int kMidiLengths[] = {4, 8, 16};
  static constexpr int kLoopLengths[] = {2, 4, 8, 16};
  for (int i = 0; i < n_tracks; ++i) {
    const bool midi = rng.chance(0.5);
    TrackNode track;
    track.name = "trk_" + std::to_string(i);
    track.kind = midi ? TrackKind::Midi : TrackKind::Audio;
    doc.tracks.emplace(track.name, track);

    std::string clip_name = "cl_" + std::to_string(i);
    std::string transform_name;
    if (midi) {
      MidiClipSpec clip;
      clip.name = clip_name;
      clip.content_type =
          static_cast<MidiContentType>(rng.uniformInt(0, 3));
      clip.length_bars = kMidiLengths[rng.uniformInt(0, 2)];
      if (rng.chance(0.5)) clip.key_root = static_cast<int>(rng.uniformInt(0, 11));
      if (rng.chance(0.5)) {
        clip.mode = rng.chance(0.5) ? KeyMode::Major : KeyMode::Minor;
      }
      if (rng.chance(0.4)) {
        std::vector<int> degrees;
        const int length = static_cast<int>(rng.uniformInt(2, 6));
        for (int d = 0; d < length; ++d) {
          degrees.push_back(static_cast<int>(rng.uniformInt(1, 7)));
        }
        clip.root_progression = std::move(degrees);
      }
      doc.clips.emplace(clip_name, ClipSpec{clip});
      transform_name = rng.chance(0.5) ? "tg_a" : "tg_b";
    } else {
      AudioClipSpec clip;
      clip.name = clip_name;
      const bool loop = rng.chance(0.5);
      clip.sample_type = loop ? AudioSampleType::Loop : AudioSampleType::OneShot;
      clip.keywords = {"tag" + std::to_string(rng.uniformInt(0, 9))};
      if (loop) clip.length_bars = kLoopLengths[rng.uniformInt(0, 3)];
      doc.clips.emplace(clip_name, ClipSpec{clip});
      if (loop) {
        transform_name = rng.chance(0.5) ? "tg_a" : "tf_a";
      } else {
        transform_name = rng.chance(0.5) ? "td_a" : "tf_a";
      }
    }

    // Each track places its clip in one to three sections.
    const int placements = static_cast<int>(rng.uniformInt(1, 3));
    for (int p = 0; p < placements; ++p) {
      const std::string& section =
          section_names[static_cast<size_t>(rng.uniformInt(
              0, static_cast<int64_t>(section_names.size()) - 1))];
      doc.links.push_back({section, track.name, clip_name, transform_name});
    }
  }
  return doc;
}

MidiClipData randomClip(uint64_t seed, int max_notes) {
  Rng rng(seed);
  MidiClipData clip;
  const int count = static_cast<int>(rng.uniformInt(1, max_notes));
  std::map<int, int64_t> last_end;  // pitch -> latest end tick
  for (int i = 0; i < count; ++i) {
    NoteEvent note;
    note.pitch = static_cast<int>(rng.uniformInt(24, 96));
    note.velocity = static_cast<int>(rng.uniformInt(1, 127));
    note.onset_ticks = rng.uniformInt(0, 63) * kTicksPerStep;
    note.duration_ticks = rng.uniformInt(1, 16) * kTicksPerStep;
    // Same-pitch overlaps are not representable on the wire; push the note
    // after the previous one on that pitch.
    auto it = last_end.find(note.pitch);
    if (it != last_end.end() && note.onset_ticks < it->second) {
      note.onset_ticks = it->second;
    }
    last_end[note.pitch] = note.onset_ticks + note.duration_ticks;
    clip.notes.push_back(note);
  }
  finalizeClip(clip);
  return clip;
}

// ---------------------------------------------------------------------------
// MIDI content
// ---------------------------------------------------------------------------

namespace {

void addChord(MidiClipData& clip, int64_t onset, int64_t duration,
              std::initializer_list<int> pitches) {
  for (int pitch : pitches) {
    clip.notes.push_back({pitch, 96, onset, duration});
  }
}

}  // namespace

MidiClipData chordProgressionClip() {
  MidiClipData clip;
  addChord(clip, 0 * kTicksPerBar, kTicksPerBar, {60, 64, 67});  // C
  addChord(clip, 1 * kTicksPerBar, kTicksPerBar, {57, 60, 64});  // Am
  addChord(clip, 2 * kTicksPerBar, kTicksPerBar, {53, 57, 60});  // F
  addChord(clip, 3 * kTicksPerBar, kTicksPerBar, {55, 59, 62});  // G
  finalizeClip(clip);
  return clip;
}

MidiClipData bassLineClip(int length_bars) {
  MidiClipData clip;
  const int pattern[] = {36, 36, 43, 36, 38, 36, 43, 41};
  for (int bar = 0; bar < length_bars; ++bar) {
    for (int i = 0; i < 8; ++i) {
      clip.notes.push_back({pattern[i], 100,
                            bar * kTicksPerBar + i * (kTicksPerBar / 8),
                            kTicksPerBar / 8});
    }
  }
  finalizeClip(clip);
  return clip;
}

MidiClipData arpeggioClip(int length_bars) {
  MidiClipData clip;
  const int cycle[] = {60, 64, 67};
  for (int bar = 0; bar < length_bars; ++bar) {
    for (int i = 0; i < 16; ++i) {
      clip.notes.push_back({cycle[i % 3], 90,
                            bar * kTicksPerBar + i * kTicksPerStep,
                            kTicksPerStep});
    }
  }
  finalizeClip(clip);
  return clip;
}

MidiClipData melodyClip(int length_bars) {
  MidiClipData clip;
  const int contour[] = {72, 74, 76, 77, 79, 81, 79, 77,
                         76, 74, 72, 71, 69, 67, 69, 71};
  int index = 0;
  for (int bar = 0; bar < length_bars; ++bar) {
    for (int beat = 0; beat < 4; ++beat) {
      clip.notes.push_back({contour[index % 16], 90,
                            bar * kTicksPerBar + beat * kTicksPerQuarter,
                            kTicksPerQuarter});
      index += (index % 5 == 3) ? 2 : 1;  // break periodic cycles
    }
  }
  finalizeClip(clip);
  return clip;
}

// ---------------------------------------------------------------------------
// Audio content
// ---------------------------------------------------------------------------

AudioBuffer toneBuffer(double freq_hz, double seconds, int sample_rate,
                       double amplitude) {
  AudioBuffer buffer;
  buffer.sample_rate = sample_rate;
  buffer.channels = 1;
  const size_t frames = static_cast<size_t>(std::llround(seconds * sample_rate));
  const size_t fade = std::min<size_t>(frames / 8, 256);
  buffer.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double envelope = 1.0;
    if (i < fade) envelope = static_cast<double>(i) / fade;
    if (frames - i <= fade) envelope = static_cast<double>(frames - i) / fade;
    buffer.samples[i] = static_cast<float>(
        amplitude * envelope *
        std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) /
                 sample_rate));
  }
  return buffer;
}

AudioBuffer noiseBurstBuffer(uint64_t seed, double seconds, int sample_rate,
                             double amplitude) {
  Rng rng(seed);
  AudioBuffer buffer;
  buffer.sample_rate = sample_rate;
  buffer.channels = 1;
  const size_t frames = static_cast<size_t>(std::llround(seconds * sample_rate));
  buffer.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    const double decay =
        std::exp(-6.0 * static_cast<double>(i) / static_cast<double>(frames));
    buffer.samples[i] = static_cast<float>(
        amplitude * decay * (rng.uniformReal() * 2.0 - 1.0));
  }
  return buffer;
}

// ---------------------------------------------------------------------------
// Databases
// ---------------------------------------------------------------------------

namespace {

/// Diatonic triad (root as lowest note) for a scale degree in C major.
MidiClipData progressionChords(const std::vector<int>& degrees, int length_bars) {
  static constexpr int kRootPc[] = {0, 0, 2, 4, 5, 7, 9, 11};  // 1-indexed
  static constexpr int kMajorScale[] = {0, 2, 4, 5, 7, 9, 11};

  MidiClipData clip;
  // One onset per chord, each held for its whole span, so the analyzed
  // progression equals the requested degree list at any clip length.
  const int bars_per_chord =
      std::max(1, length_bars / static_cast<int>(degrees.size()));
  for (size_t i = 0; i < degrees.size(); ++i) {
    const int start_bar = static_cast<int>(i) * bars_per_chord;
    if (start_bar >= length_bars) break;
    const int span_bars =
        std::min(bars_per_chord, length_bars - start_bar);
    const int degree = degrees[i];
    const int root_pc = kRootPc[degree];
    // Stack diatonic thirds above the root.
    const int scale_index = degree - 1;
    const int third_pc = kMajorScale[(scale_index + 2) % 7];
    const int fifth_pc = kMajorScale[(scale_index + 4) % 7];
    const int root = 60 + root_pc;
    int third = 60 + third_pc;
    int fifth = 60 + fifth_pc;
    while (third <= root) third += 12;
    while (fifth <= third) fifth += 12;
    addChord(clip, static_cast<int64_t>(start_bar) * kTicksPerBar,
             static_cast<int64_t>(span_bars) * kTicksPerBar,
             {root, third, fifth});
  }
  finalizeClip(clip);
  return clip;
}

}  // namespace

FixtureLibrary buildFixtureLibrary(const ScratchDir& dir) {
  FixtureLibrary library;
  library.midi_dir = dir.file("midi_samples");
  library.audio_dir = dir.file("audio_samples");
  library.midi_db_path = dir.file("midi.db");
  library.audio_db_path = dir.file("audio.db");
  fs::create_directories(library.midi_dir);
  fs::create_directories(library.audio_dir);

  auto writeMidi = [&](const std::string& name, const MidiClipData& clip) {
    writeBinaryFile((fs::path(library.midi_dir) / name).string(),
                    writeMidiFile(clip, 120.0));
  };

  const std::vector<std::vector<int>> progressions = {
      {1, 6, 4, 5}, {1, 4, 5, 1}, {6, 4, 1, 5}, {1, 5, 6, 4}, {2, 5, 1, 4}};
  for (size_t p = 0; p < progressions.size(); ++p) {
    writeMidi("chords_p" + std::to_string(p) + "_4bar.mid",
              progressionChords(progressions[p], 4));
    writeMidi("chords_p" + std::to_string(p) + "_8bar.mid",
              progressionChords(progressions[p], 8));
  }
  writeMidi("bass_4bar.mid", bassLineClip(4));
  writeMidi("bass_8bar.mid", bassLineClip(8));
  writeMidi("arp_4bar.mid", arpeggioClip(4));
  writeMidi("melody_4bar.mid", melodyClip(4));
  writeMidi("melody_8bar.mid", melodyClip(8));

  auto writeWavFixture = [&](const std::string& name, const AudioBuffer& buffer) {
    writeWavPcm16((fs::path(library.audio_dir) / name).string(), buffer);
  };

  // Tonal loops at 120 BPM: 4 bars = 8 s, 8 bars = 16 s.
  writeWavFixture("pad_4bar.wav", toneBuffer(220.0, 8.0));
  writeWavFixture("pad_8bar.wav", toneBuffer(220.0, 16.0));
  writeWavFixture("pluck_4bar.wav", toneBuffer(330.0, 8.0));
  writeWavFixture("pluck_8bar.wav", toneBuffer(330.0, 16.0));
  writeWavFixture("keys_4bar.wav", toneBuffer(262.0, 8.0));
  writeWavFixture("keys_8bar.wav", toneBuffer(262.0, 16.0));
  writeWavFixture("kick.wav", noiseBurstBuffer(11, 0.30));
  writeWavFixture("snare.wav", noiseBurstBuffer(12, 0.25));
  writeWavFixture("clap.wav", noiseBurstBuffer(13, 0.20));
  writeWavFixture("hat.wav", noiseBurstBuffer(14, 0.10));
  writeWavFixture("perc.wav", noiseBurstBuffer(15, 0.15));
  writeWavFixture("riser.wav", toneBuffer(440.0, 2.0));
  writeWavFixture("faller.wav", toneBuffer(180.0, 2.0));

  std::ostringstream manifest;
  manifest << "# path\ttype\tkeywords\t[length_bars]\t[source_bpm]\n";
  manifest << "pad_4bar.wav\tloop\tpad,synth,chords\t4\t120\n";
  manifest << "pad_8bar.wav\tloop\tpad,synth,chords\t8\t120\n";
  manifest << "pluck_4bar.wav\tloop\tpluck,synth\t4\t120\n";
  manifest << "pluck_8bar.wav\tloop\tpluck,synth\t8\t120\n";
  manifest << "keys_4bar.wav\tloop\tkeys,chords\t4\t120\n";
  manifest << "keys_8bar.wav\tloop\tkeys,chords\t8\t120\n";
  manifest << "kick.wav\tone_shot\tkick,punchy\n";
  manifest << "snare.wav\tone_shot\tsnare\n";
  manifest << "clap.wav\tone_shot\tclap\n";
  manifest << "hat.wav\tone_shot\that\n";
  manifest << "perc.wav\tone_shot\tperc\n";
  manifest << "riser.wav\tone_shot\triser,sfx\n";
  manifest << "faller.wav\tone_shot\tfaller,sfx\n";
  const std::string manifest_path = dir.file("audio_manifest.tsv");
  writeTextFile(manifest_path, manifest.str());

  auto midi_db = SampleDb::open(library.midi_db_path);
  auto audio_db = SampleDb::open(library.audio_db_path);
  ingestMidiDir(library.midi_dir, *midi_db);
  ingestAudioDir(library.audio_dir, manifest_path, *audio_db);
  return library;
}

}  // namespace tomi::testing
