#include "tomi/render/renderer.h"

#include <filesystem>

#include "tomi/midi/smf.h"
#include "tomi/render/limiter.h"
#include "tomi/render/rpp_export.h"
#include "tomi/util/file_io.h"

namespace fs = std::filesystem;

namespace tomi {

std::string sanitizeFileName(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out.push_back(safe ? c : '_');
  }
  return out.empty() ? "track" : out;
}

std::vector<std::string> exportMidiTracks(const Arrangement& arrangement,
                                          const TomiDocument& doc,
                                          const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);

  std::vector<std::string> paths;
  for (const auto& [track_name, track] : doc.tracks) {
    if (track.kind != TrackKind::Midi) continue;

    MidiClipData merged;
    for (const PlacedMidiClip& placement : arrangement.midi_placements) {
      if (placement.track != track_name) continue;
      const SectionInstance& instance =
          arrangement.timeline.instances[static_cast<size_t>(
              placement.instance_index)];
      const int64_t offset =
          static_cast<int64_t>(instance.start_bar) * kTicksPerBar;
      for (NoteEvent note : placement.notes) {
        note.onset_ticks += offset;
        merged.notes.push_back(note);
      }
    }
    finalizeClip(merged);

    const std::string path =
        (fs::path(dir) / (sanitizeFileName(track_name) + ".mid")).string();
    writeBinaryFile(path, writeMidiFile(merged, arrangement.tempo_bpm));
    paths.push_back(path);
  }
  return paths;
}

RenderOutputs renderSong(const Arrangement& arrangement, const TomiDocument& doc,
                         const RenderConfig& config, const std::string& out_dir) {
  RenderOutputs outputs;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  outputs.presets = assignPresets(trackRoleHints(doc), config.seed);

  SynthResult synth = synthesize(arrangement, outputs.presets, config);
  if (!synth.ok) {
    outputs.error = synth.error;
    return outputs;
  }
  limitMaster(synth.master, config.limiter_ceiling);

  outputs.wav_path = (fs::path(out_dir) / "song.wav").string();
  if (!writeWavPcm16(outputs.wav_path, synth.master)) {
    outputs.error = "cannot write " + outputs.wav_path;
    return outputs;
  }

  const std::string midi_dir = (fs::path(out_dir) / "midi").string();
  outputs.midi_paths = exportMidiTracks(arrangement, doc, midi_dir);

  outputs.rpp_path = (fs::path(out_dir) / "song.rpp").string();
  if (!writeTextFile(outputs.rpp_path, exportRpp(arrangement, doc, midi_dir))) {
    outputs.error = "cannot write " + outputs.rpp_path;
    return outputs;
  }

  outputs.ok = true;
  return outputs;
}

}  // namespace tomi
