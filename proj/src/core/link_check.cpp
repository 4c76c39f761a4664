#include "tomi/core/link_check.h"

namespace tomi {

const char* toString(LinkViolation violation) {
  switch (violation) {
    case LinkViolation::UnknownSection: return "unknown_section";
    case LinkViolation::UnknownTrack: return "unknown_track";
    case LinkViolation::UnknownClip: return "unknown_clip";
    case LinkViolation::UnknownTransform: return "unknown_transform";
    case LinkViolation::TypeMismatch: return "type_mismatch";
    case LinkViolation::FxRequiresAudio: return "fx_requires_audio";
    case LinkViolation::DrumRequiresOneShot: return "drum_requires_one_shot";
  }
  return "unknown";
}

std::vector<LinkViolation> checkLinkCompat(const TomiDocument& doc,
                                           const CompositionLink& link) {
  std::vector<LinkViolation> violations;

  if (!doc.sections.contains(link.section_ref)) {
    violations.push_back(LinkViolation::UnknownSection);
  }
  auto track_it = doc.tracks.find(link.track_ref);
  if (track_it == doc.tracks.end()) {
    violations.push_back(LinkViolation::UnknownTrack);
  }
  auto clip_it = doc.clips.find(link.clip_ref);
  if (clip_it == doc.clips.end()) {
    violations.push_back(LinkViolation::UnknownClip);
  }
  auto transform_it = doc.transforms.find(link.transform_ref);
  if (transform_it == doc.transforms.end()) {
    violations.push_back(LinkViolation::UnknownTransform);
  }

  if (track_it != doc.tracks.end() && clip_it != doc.clips.end() &&
      clipKind(clip_it->second) != track_it->second.kind) {
    violations.push_back(LinkViolation::TypeMismatch);
  }

  if (transform_it != doc.transforms.end() && clip_it != doc.clips.end()) {
    const TransformationNode& transform = transform_it->second;
    const ClipSpec& clip = clip_it->second;
    if (transform.subclass == TransformSubclass::Fx &&
        clipKind(clip) == TrackKind::Midi) {
      violations.push_back(LinkViolation::FxRequiresAudio);
    }
    if (transform.subclass == TransformSubclass::Drum) {
      const auto* audio = std::get_if<AudioClipSpec>(&clip);
      if (audio != nullptr && audio->sample_type == AudioSampleType::Loop) {
        violations.push_back(LinkViolation::DrumRequiresOneShot);
      }
    }
  }

  return violations;
}

}  // namespace tomi
