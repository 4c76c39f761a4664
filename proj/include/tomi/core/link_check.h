// Structural compatibility checks for a single composition link.

#pragma once

#include <string>
#include <vector>

#include "tomi/core/types.h"

namespace tomi {

enum class LinkViolation {
  UnknownSection,
  UnknownTrack,
  UnknownClip,
  UnknownTransform,
  TypeMismatch,      // clip kind does not match track kind
  FxRequiresAudio,   // fx transform paired with a MIDI clip
  DrumRequiresOneShot,  // drum transform paired with an audio loop
};

const char* toString(LinkViolation violation);

/// Returns every violated link invariant; empty means the link is
/// well-formed within the document. Violations are data, not failures.
std::vector<LinkViolation> checkLinkCompat(const TomiDocument& doc,
                                           const CompositionLink& link);

}  // namespace tomi
