// REAPER project export: tracks, media items, and section markers in the
// minimal element subset documented in docs/rpp.md. Output is
// deterministic text; golden files are the automated contract.

#pragma once

#include <string>

#include "tomi/core/types.h"

namespace tomi {

/// One TRACK block per document track, one MARKER per section-instance
/// boundary ("name:label") plus an end marker, one ITEM per placement.
/// MIDI items embed their events; audio items reference sample files.
std::string exportRpp(const Arrangement& arrangement, const TomiDocument& doc,
                      const std::string& media_dir);

}  // namespace tomi
