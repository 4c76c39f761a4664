// Expands the section sequence into a timeline and resolves every
// surviving composition link into placed, transformed, key/tempo-normalized
// content. Content is computed once per link and reused for every timeline
// instance of its section, so repeated sections stay bit-identical.

#pragma once

#include <string>
#include <vector>

#include "tomi/db/sample_db.h"
#include "tomi/midi/smf.h"

namespace tomi {

/// One contiguous instance per sequence entry, starting at bar 0.
Timeline buildTimeline(const TomiDocument& doc);

/// Transposition interval in semitones, chosen within [-6, +5].
int transposeInterval(int clip_root, int global_root);

/// Shifts every pitch by transposeInterval(clip_root, global_root); the
/// mode is left untouched.
MidiClipData normalizePitch(const MidiClipData& clip, int clip_root,
                            int global_root);

/// Output duration multiplier for fitting a loop recorded at source_bpm to
/// target_bpm. Throws on non-positive input.
double stretchRatio(double source_bpm, double target_bpm);

struct ArrangeResult {
  bool ok = false;
  std::string error;
  Arrangement arrangement;
  std::vector<std::string> warnings;
};

/// Requires completed retrieval and a timeline built from the same
/// document. Bound MIDI clips are read from their sample files, transposed
/// to the global key, and retimed by their transformation; audio loops are
/// scheduled with tempo stretch, one-shots and fx by their transform rules.
ArrangeResult resolveLinks(const ResolvedDocument& rdoc, const Timeline& timeline);

}  // namespace tomi
