#include "tomi/gen/random_gen.h"

#include <array>
#include <stdexcept>

#include "json.hpp"

#include "tomi/util/file_io.h"
#include "tomi/util/rng.h"

namespace tomi {

KeywordPools KeywordPools::defaults() {
  KeywordPools pools;
  pools.tonal = {"pad", "pluck", "synth", "keys", "chords"};
  pools.percussion = {"kick", "snare", "clap", "hat", "perc"};
  pools.sfx = {"riser", "faller"};
  return pools;
}

KeywordPools loadKeywordPools(const std::string& path) {
  auto text = readTextFile(path);
  if (!text) return KeywordPools::defaults();
  try {
    nlohmann::json parsed = nlohmann::json::parse(*text);
    KeywordPools pools;
    pools.tonal = parsed.value("tonal", KeywordPools::defaults().tonal);
    pools.percussion =
        parsed.value("percussion", KeywordPools::defaults().percussion);
    pools.sfx = parsed.value("sfx", KeywordPools::defaults().sfx);
    if (pools.tonal.empty() || pools.percussion.empty() || pools.sfx.empty()) {
      return KeywordPools::defaults();
    }
    return pools;
  } catch (const std::exception&) {
    return KeywordPools::defaults();
  }
}

namespace {

enum class TrackIntent { Midi, AudioTonal, AudioPercussion, AudioSfx };

constexpr std::array<std::array<int, 4>, 5> kProgressionPool = {{
    {1, 6, 4, 5},
    {1, 4, 5, 1},
    {6, 4, 1, 5},
    {1, 5, 6, 4},
    {2, 5, 1, 4},
}};

std::string zeroPadded(int value) {
  return value < 10 ? "0" + std::to_string(value) : std::to_string(value);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& pool) {
  return pool[static_cast<size_t>(
      rng.uniformInt(0, static_cast<int64_t>(pool.size()) - 1))];
}

}  // namespace

TomiDocument randomGenerate(const GenerationContext& ctx,
                            const RandomGenConfig& config, uint64_t seed) {
  if (!ctx.section_sequence || ctx.section_sequence->empty()) {
    throw std::invalid_argument("random generation needs a section sequence");
  }

  Rng rng(seed);
  TomiDocument doc;
  doc.tempo_bpm = ctx.tempo_bpm;
  doc.key = ctx.key;

  // Sections follow the conditioning sequence; repeated names reuse the
  // same node and must agree on label and length.
  for (const SectionConstraint& constraint : *ctx.section_sequence) {
    auto existing = doc.sections.find(constraint.name);
    if (existing != doc.sections.end()) {
      if (existing->second.label != constraint.label ||
          existing->second.length_bars != constraint.length_bars) {
        throw std::invalid_argument("conflicting reuse of section \"" +
                                    constraint.name + "\" in the sequence");
      }
    } else {
      doc.sections.emplace(constraint.name,
                           SectionNode{constraint.name, constraint.label,
                                       constraint.length_bars});
    }
    doc.section_sequence.push_back(constraint.name);
  }

  // The four predefined transformations.
  const std::string tf_general = "tf_general";
  const std::string tf_drum = "tf_drum";
  const std::string tf_riser = "tf_riser";
  const std::string tf_faller = "tf_faller";
  doc.transforms.emplace(
      tf_general,
      TransformationNode{tf_general, TransformSubclass::General,
                         *parseActionSequence("OSSSSSSSSSSSSSSS"),
                         LoopMode::Loop, std::nullopt});
  doc.transforms.emplace(
      tf_drum, TransformationNode{tf_drum, TransformSubclass::Drum,
                                  *parseActionSequence("ORRRORRRORRRORRR"),
                                  LoopMode::Loop, std::nullopt});
  doc.transforms.emplace(
      tf_riser, TransformationNode{tf_riser, TransformSubclass::Fx, {},
                                   LoopMode::Once, FxAlignment::Right});
  doc.transforms.emplace(
      tf_faller, TransformationNode{tf_faller, TransformSubclass::Fx, {},
                                    LoopMode::Once, FxAlignment::Left});

  // Tracks.
  const int track_count = static_cast<int>(rng.uniformInt(15, 25));
  struct TrackPlan {
    std::string name;
    TrackIntent intent;
  };
  std::vector<TrackPlan> plans;
  for (int i = 0; i < track_count; ++i) {
    const double roll = rng.uniformReal();
    TrackIntent intent;
    const char* tag;
    if (roll < 0.45) {
      intent = TrackIntent::Midi;
      tag = "midi";
    } else if (roll < 0.65) {
      intent = TrackIntent::AudioTonal;
      tag = "tonal";
    } else if (roll < 0.90) {
      intent = TrackIntent::AudioPercussion;
      tag = "perc";
    } else {
      intent = TrackIntent::AudioSfx;
      tag = "sfx";
    }
    const std::string name = "track_" + zeroPadded(i + 1) + "_" + tag;
    doc.tracks.emplace(
        name, TrackNode{name, intent == TrackIntent::Midi ? TrackKind::Midi
                                                          : TrackKind::Audio});
    plans.push_back({name, intent});
  }

  // Clip bookkeeping: reuse pools per intent and the fixed clip->transform
  // assignment.
  std::map<std::string, std::string> clip_transform;
  std::map<TrackIntent, std::vector<std::string>> reuse_pool;
  std::vector<std::string> chord_clips;
  int clip_counter = 0;

  auto newClip = [&](TrackIntent intent) -> std::string {
    ++clip_counter;
    if (intent == TrackIntent::Midi) {
      // Uniform over chord/bass/melody; bass derives its progression from
      // an existing chord spec, so the first bass falls back to chord.
      int kind = static_cast<int>(rng.uniformInt(0, 2));
      if (kind == 1 && chord_clips.empty()) kind = 0;
      MidiClipSpec clip;
      clip.length_bars = rng.chance(0.5) ? 4 : 8;
      if (kind == 0) {
        clip.content_type = MidiContentType::Chord;
        const auto& degrees =
            kProgressionPool[static_cast<size_t>(rng.uniformInt(
                0, static_cast<int64_t>(kProgressionPool.size()) - 1))];
        clip.root_progression =
            std::vector<int>(degrees.begin(), degrees.end());
        clip.name = "clip_" + zeroPadded(clip_counter) + "_chord";
        chord_clips.push_back(clip.name);
      } else if (kind == 1) {
        clip.content_type = MidiContentType::Bass;
        const std::string& source = pick(rng, chord_clips);
        clip.root_progression =
            std::get<MidiClipSpec>(doc.clips.at(source)).root_progression;
        clip.name = "clip_" + zeroPadded(clip_counter) + "_bass";
      } else {
        clip.content_type = MidiContentType::Melody;
        clip.name = "clip_" + zeroPadded(clip_counter) + "_melody";
      }
      const std::string name = clip.name;
      doc.clips.emplace(name, ClipSpec{std::move(clip)});
      clip_transform[name] = tf_general;
      return name;
    }

    AudioClipSpec clip;
    if (intent == TrackIntent::AudioTonal) {
      clip.sample_type = AudioSampleType::Loop;
      clip.keywords = {pick(rng, config.pools.tonal)};
      clip.length_bars = rng.chance(0.5) ? 4 : 8;
      clip.name = "clip_" + zeroPadded(clip_counter) + "_tonal";
      clip_transform[clip.name] = tf_general;
    } else if (intent == TrackIntent::AudioPercussion) {
      clip.sample_type = AudioSampleType::OneShot;
      clip.keywords = {pick(rng, config.pools.percussion)};
      clip.name = "clip_" + zeroPadded(clip_counter) + "_perc";
      clip_transform[clip.name] = tf_drum;
    } else {
      clip.sample_type = AudioSampleType::OneShot;
      const std::string keyword = pick(rng, config.pools.sfx);
      clip.keywords = {keyword};
      clip.name = "clip_" + zeroPadded(clip_counter) + "_sfx";
      clip_transform[clip.name] =
          keyword.find("faller") != std::string::npos ? tf_faller : tf_riser;
    }
    const std::string name = clip.name;
    doc.clips.emplace(name, ClipSpec{std::move(clip)});
    return name;
  };

  // Populate sections track by track: skip, reuse, or create per cell.
  for (const TrackPlan& plan : plans) {
    for (const auto& [section_name, section] : doc.sections) {
      const double roll = rng.uniformReal();
      if (roll < config.skip_probability) continue;

      std::string clip_name;
      auto& pool = reuse_pool[plan.intent];
      if (roll < config.skip_probability + config.reuse_probability &&
          !pool.empty()) {
        clip_name = pick(rng, pool);
      } else {
        clip_name = newClip(plan.intent);
        pool.push_back(clip_name);
      }
      doc.links.push_back(
          {section_name, plan.name, clip_name, clip_transform.at(clip_name)});
    }
  }

  return doc;
}

}  // namespace tomi
