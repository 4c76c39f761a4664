// Deliverable rendering: per-track MIDI files, the limited stereo WAV
// mixdown, and the REAPER project file.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "tomi/core/types.h"
#include "tomi/render/synth.h"

namespace tomi {

struct RenderOutputs {
  bool ok = false;
  std::string error;
  std::string wav_path;
  std::string rpp_path;
  std::vector<std::string> midi_paths;
  std::map<std::string, int> presets;  // track -> preset id
};

/// Replaces characters outside [A-Za-z0-9._-] so node names are usable as
/// file names.
std::string sanitizeFileName(const std::string& name);

/// One SMF per MIDI track under dir, notes offset by section-instance
/// starts, tempo meta from the arrangement.
std::vector<std::string> exportMidiTracks(const Arrangement& arrangement,
                                          const TomiDocument& doc,
                                          const std::string& dir);

/// Full render: synthesize + master limit + WAV/MIDI/RPP files under
/// out_dir ("song.wav", "midi/<track>.mid", "song.rpp").
RenderOutputs renderSong(const Arrangement& arrangement, const TomiDocument& doc,
                         const RenderConfig& config, const std::string& out_dir);

}  // namespace tomi
