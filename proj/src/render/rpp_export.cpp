#include "tomi/render/rpp_export.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace tomi {

namespace {

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string hex2(int value) {
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "%02x", value & 0xff);
  return buffer;
}

struct MidiWireEvent {
  int64_t tick;
  int order;  // offs before ons
  int status;
  int d1;
  int d2;
};

/// REAPER-native embedded MIDI source: delta-timed "E" lines at 480 TPQ.
void writeMidiSource(std::ostringstream& out, const std::vector<NoteEvent>& notes,
                     int64_t item_ticks, const std::string& indent) {
  out << indent << "<SOURCE MIDI\n";
  out << indent << "  HASDATA 1 480 QN\n";

  std::vector<MidiWireEvent> events;
  for (const NoteEvent& note : notes) {
    const int pitch = std::clamp(note.pitch, 0, 127);
    const int velocity = std::clamp(note.velocity, 1, 127);
    events.push_back({note.onset_ticks, 1, 0x90, pitch, velocity});
    events.push_back({note.onset_ticks + note.duration_ticks, 0, 0x80, pitch, 0});
  }
  std::sort(events.begin(), events.end(),
            [](const MidiWireEvent& a, const MidiWireEvent& b) {
              if (a.tick != b.tick) return a.tick < b.tick;
              if (a.order != b.order) return a.order < b.order;
              return a.d1 < b.d1;
            });

  int64_t cursor = 0;
  for (const MidiWireEvent& event : events) {
    out << indent << "  E " << event.tick - cursor << " " << hex2(event.status)
        << " " << hex2(event.d1) << " " << hex2(event.d2) << "\n";
    cursor = event.tick;
  }
  // All-notes-off pads the source out to the item boundary.
  const int64_t tail = std::max<int64_t>(item_ticks - cursor, 0);
  out << indent << "  E " << tail << " b0 7b 00\n";
  out << indent << ">\n";
}

}  // namespace

std::string exportRpp(const Arrangement& arrangement, const TomiDocument& doc,
                      const std::string& media_dir) {
  (void)media_dir;  // audio items keep their library paths
  const double bar_sec = barSeconds(arrangement.tempo_bpm);

  std::ostringstream out;
  out << "<REAPER_PROJECT 0.1 \"6.82\" 0\n";
  out << "  TEMPO " << fixed6(arrangement.tempo_bpm) << " 4 4\n";

  int marker_id = 1;
  for (const SectionInstance& instance : arrangement.timeline.instances) {
    out << "  MARKER " << marker_id++ << " " << fixed6(instance.start_bar * bar_sec)
        << " \"" << instance.section << ":" << toString(instance.label)
        << "\" 0\n";
  }
  out << "  MARKER " << marker_id << " "
      << fixed6(arrangement.timeline.total_bars * bar_sec) << " \"end\" 0\n";

  for (const auto& [track_name, track] : doc.tracks) {
    out << "  <TRACK\n";
    out << "    NAME \"" << track_name << "\"\n";

    if (track.kind == TrackKind::Midi) {
      for (const PlacedMidiClip& placement : arrangement.midi_placements) {
        if (placement.track != track_name) continue;
        const SectionInstance& instance =
            arrangement.timeline.instances[static_cast<size_t>(
                placement.instance_index)];
        const double position = instance.start_bar * bar_sec;
        const double length = instance.length_bars * bar_sec;
        out << "    <ITEM\n";
        out << "      POSITION " << fixed6(position) << "\n";
        out << "      LENGTH " << fixed6(length) << "\n";
        out << "      NAME \"" << track_name << ":" << instance.section << "\"\n";
        writeMidiSource(out, placement.notes,
                        static_cast<int64_t>(instance.length_bars) * kTicksPerBar,
                        "      ");
        out << "    >\n";
      }
    } else {
      for (const PlacedAudioClip& placement : arrangement.audio_placements) {
        if (placement.track != track_name) continue;
        const SectionInstance& instance =
            arrangement.timeline.instances[static_cast<size_t>(
                placement.instance_index)];
        const AudioRegionDesc& region = placement.region;
        const double position =
            instance.start_bar * bar_sec + region.start_seconds;
        out << "    <ITEM\n";
        out << "      POSITION " << fixed6(position) << "\n";
        out << "      LENGTH " << fixed6(region.region_seconds) << "\n";
        out << "      NAME \"" << track_name << ":" << instance.section << "\"\n";
        if (region.stretch_ratio != 1.0) {
          out << "      PLAYRATE " << fixed6(1.0 / region.stretch_ratio)
              << " 0 0.000000\n";
        }
        if (region.head_trim_seconds != 0.0) {
          out << "      SOFFS " << fixed6(region.head_trim_seconds) << "\n";
        }
        out << "      <SOURCE WAVE\n";
        out << "        FILE \"" << region.path << "\"\n";
        out << "      >\n";
        out << "    >\n";
      }
    }
    out << "  >\n";
  }
  out << ">\n";
  return out.str();
}

}  // namespace tomi
