#include "tomi/arrange/arranger.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "tomi/transform/transform.h"
#include "tomi/util/file_io.h"

namespace tomi {

Timeline buildTimeline(const TomiDocument& doc) {
  Timeline timeline;
  std::map<std::string, int> occurrences;
  int cursor = 0;
  for (const std::string& name : doc.section_sequence) {
    const SectionNode& section = doc.sections.at(name);
    SectionInstance instance;
    instance.section = name;
    instance.occurrence = occurrences[name]++;
    instance.start_bar = cursor;
    instance.length_bars = section.length_bars;
    instance.label = section.label;
    cursor += section.length_bars;
    timeline.instances.push_back(std::move(instance));
  }
  timeline.total_bars = cursor;
  return timeline;
}

int transposeInterval(int clip_root, int global_root) {
  int t = ((global_root - clip_root) % 12 + 12) % 12;
  if (t > 5) t -= 12;  // keep register drift within [-6, +5]
  return t;
}

MidiClipData normalizePitch(const MidiClipData& clip, int clip_root,
                            int global_root) {
  const int t = transposeInterval(clip_root, global_root);
  MidiClipData out = clip;
  for (NoteEvent& note : out.notes) {
    int pitch = note.pitch + t;
    while (pitch > 127) pitch -= 12;
    while (pitch < 0) pitch += 12;
    note.pitch = pitch;
  }
  return out;
}

double stretchRatio(double source_bpm, double target_bpm) {
  if (source_bpm <= 0.0 || target_bpm <= 0.0) {
    throw std::invalid_argument("tempi must be positive");
  }
  return source_bpm / target_bpm;
}

namespace {

struct LinkContent {
  bool is_midi = false;
  std::vector<NoteEvent> notes;          // MIDI links
  std::vector<AudioRegionDesc> regions;  // audio links
};

/// Instance indices where a section appears, in timeline order.
std::vector<int> instancesOf(const Timeline& timeline, const std::string& section) {
  std::vector<int> indices;
  for (size_t i = 0; i < timeline.instances.size(); ++i) {
    if (timeline.instances[i].section == section) {
      indices.push_back(static_cast<int>(i));
    }
  }
  return indices;
}

}  // namespace

ArrangeResult resolveLinks(const ResolvedDocument& rdoc, const Timeline& timeline) {
  ArrangeResult result;
  const TomiDocument& doc = rdoc.doc;
  result.arrangement.timeline = timeline;
  result.arrangement.tempo_bpm = doc.tempo_bpm;
  result.arrangement.key = doc.key;

  // Parsed + transposed MIDI content, cached per sample path.
  std::map<std::string, MidiClipData> midi_cache;

  for (size_t link_index = 0; link_index < doc.links.size(); ++link_index) {
    if (std::find(rdoc.discarded_links.begin(), rdoc.discarded_links.end(),
                  link_index) != rdoc.discarded_links.end()) {
      continue;
    }
    const CompositionLink& link = doc.links[link_index];
    const auto section_it = doc.sections.find(link.section_ref);
    const auto transform_it = doc.transforms.find(link.transform_ref);
    const auto binding_it = rdoc.bindings.find(link.clip_ref);
    if (section_it == doc.sections.end() || transform_it == doc.transforms.end() ||
        binding_it == rdoc.bindings.end()) {
      result.error = "link " + std::to_string(link_index) +
                     " references unresolved nodes; validate and retrieve first";
      return result;
    }
    const SectionNode& section = section_it->second;
    const TransformationNode& transform = transform_it->second;

    const std::vector<int> instances = instancesOf(timeline, link.section_ref);
    if (instances.empty()) continue;  // declared but unused section

    // Transform once per link; reuse across instances.
    LinkContent content;
    if (const auto* midi_row = std::get_if<MidiSampleRow>(&binding_it->second)) {
      if (transform.subclass == TransformSubclass::Fx) {
        result.error = "link " + std::to_string(link_index) +
                       " applies an fx transform to a MIDI clip";
        return result;
      }
      MidiClipData clip;
      auto cached = midi_cache.find(midi_row->path);
      if (cached != midi_cache.end()) {
        clip = cached->second;
      } else {
        auto bytes = readBinaryFile(midi_row->path);
        if (!bytes) {
          result.error = "cannot read MIDI sample: " + midi_row->path;
          return result;
        }
        SmfParseResult parsed = parseMidiFile(*bytes);
        if (!parsed.ok) {
          result.error = midi_row->path + ": " + parsed.error;
          return result;
        }
        clip = normalizePitch(parsed.clip, midi_row->key_root, doc.key.root);
        midi_cache.emplace(midi_row->path, clip);
      }
      if (midi_row->mode != doc.key.mode) {
        result.warnings.push_back(
            "clip \"" + link.clip_ref + "\" sample is " +
            toString(midi_row->mode) + " but the global key is " +
            toString(doc.key.mode) + "; transposing root only");
      }
      content.is_midi = true;
      content.notes = applyGeneral(clip, transform, section.length_bars).notes;
    } else {
      const AudioSampleRow& audio_row = std::get<AudioSampleRow>(binding_it->second);
      const double bar_sec = barSeconds(doc.tempo_bpm);

      if (transform.subclass == TransformSubclass::Fx) {
        double duration = audio_row.duration_seconds;
        double ratio = 1.0;
        if (audio_row.sample_type == AudioSampleType::Loop && audio_row.source_bpm) {
          ratio = stretchRatio(*audio_row.source_bpm, doc.tempo_bpm);
          duration *= ratio;
        }
        const FxPlacement fx =
            applyFx(transform, section.length_bars, doc.tempo_bpm, duration);
        AudioRegionDesc region;
        region.path = audio_row.path;
        region.start_seconds = fx.start_seconds;
        region.head_trim_seconds = fx.head_trim_seconds;
        region.region_seconds = fx.region_seconds;
        region.stretch_ratio = ratio;
        region.one_shot = audio_row.sample_type == AudioSampleType::OneShot;
        content.regions.push_back(std::move(region));
      } else if (audio_row.sample_type == AudioSampleType::OneShot) {
        if (transform.subclass == TransformSubclass::Drum) {
          for (const DrumHit& hit :
               applyDrum(transform, section.length_bars, doc.tempo_bpm)) {
            AudioRegionDesc region;
            region.path = audio_row.path;
            region.start_seconds = hit.start_seconds;
            region.gain = hit.gain;
            region.region_seconds = audio_row.duration_seconds;  // natural ring
            region.one_shot = true;
            content.regions.push_back(std::move(region));
          }
        } else {
          // General transform on a one-shot: place it once at the section
          // start and let it ring.
          AudioRegionDesc region;
          region.path = audio_row.path;
          region.start_seconds = 0.0;
          region.region_seconds = audio_row.duration_seconds;
          region.one_shot = true;
          content.regions.push_back(std::move(region));
        }
      } else {
        // Loop with a general/drum transform: tempo-stretch and tile per
        // loop mode.
        if (!audio_row.source_bpm || !audio_row.length_bars) {
          result.error = "loop sample lacks tempo metadata: " + audio_row.path;
          return result;
        }
        const double ratio = stretchRatio(*audio_row.source_bpm, doc.tempo_bpm);
        const double loop_sec = *audio_row.length_bars * bar_sec;
        for (const LoopSpan& span :
             fitLoop(*audio_row.length_bars, section.length_bars,
                     transform.loop_mode)) {
          AudioRegionDesc region;
          region.path = audio_row.path;
          region.start_seconds = span.repeat_index * loop_sec;
          region.region_seconds = span.bars_used * bar_sec;
          region.stretch_ratio = ratio;
          region.one_shot = false;
          content.regions.push_back(std::move(region));
        }
      }
    }

    for (int instance_index : instances) {
      if (content.is_midi) {
        PlacedMidiClip placement;
        placement.track = link.track_ref;
        placement.instance_index = instance_index;
        placement.notes = content.notes;
        result.arrangement.midi_placements.push_back(std::move(placement));
      }
      for (const AudioRegionDesc& region : content.regions) {
        PlacedAudioClip placement;
        placement.track = link.track_ref;
        placement.instance_index = instance_index;
        placement.region = region;
        result.arrangement.audio_placements.push_back(std::move(placement));
      }
    }
  }

  // Normalize ordering so parallel resolution stays deterministic.
  std::stable_sort(result.arrangement.midi_placements.begin(),
                   result.arrangement.midi_placements.end(),
                   [](const PlacedMidiClip& a, const PlacedMidiClip& b) {
                     if (a.track != b.track) return a.track < b.track;
                     return a.instance_index < b.instance_index;
                   });
  std::stable_sort(result.arrangement.audio_placements.begin(),
                   result.arrangement.audio_placements.end(),
                   [](const PlacedAudioClip& a, const PlacedAudioClip& b) {
                     if (a.track != b.track) return a.track < b.track;
                     if (a.instance_index != b.instance_index) {
                       return a.instance_index < b.instance_index;
                     }
                     return a.region.start_seconds < b.region.start_seconds;
                   });

  result.ok = true;
  return result;
}

}  // namespace tomi
