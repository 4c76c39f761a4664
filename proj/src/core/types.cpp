#include "tomi/core/types.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace tomi {

namespace {

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename Enum, size_t N>
std::optional<Enum> parseEnum(std::string_view text,
                              const std::array<std::pair<const char*, Enum>, N>& table) {
  std::string low = lowered(text);
  for (const auto& [name, value] : table) {
    if (low == name) return value;
  }
  return std::nullopt;
}

}  // namespace

const char* toString(PhraseLabel label) {
  switch (label) {
    case PhraseLabel::Intro: return "intro";
    case PhraseLabel::Verse: return "verse";
    case PhraseLabel::PreChorus: return "pre_chorus";
    case PhraseLabel::Chorus: return "chorus";
    case PhraseLabel::Bridge: return "bridge";
    case PhraseLabel::Outro: return "outro";
  }
  return "verse";
}

const char* toString(TrackKind kind) {
  return kind == TrackKind::Midi ? "midi" : "audio";
}

const char* toString(MidiContentType type) {
  switch (type) {
    case MidiContentType::Chord: return "chord";
    case MidiContentType::Bass: return "bass";
    case MidiContentType::Melody: return "melody";
    case MidiContentType::Arpeggio: return "arpeggio";
  }
  return "chord";
}

const char* toString(KeyMode mode) {
  return mode == KeyMode::Major ? "major" : "minor";
}

const char* toString(AudioSampleType type) {
  return type == AudioSampleType::Loop ? "loop" : "one_shot";
}

const char* toString(TransformSubclass subclass) {
  switch (subclass) {
    case TransformSubclass::General: return "general";
    case TransformSubclass::Drum: return "drum";
    case TransformSubclass::Fx: return "fx";
  }
  return "general";
}

const char* toString(LoopMode mode) {
  switch (mode) {
    case LoopMode::Once: return "once";
    case LoopMode::Loop: return "loop";
    case LoopMode::Trim: return "trim";
  }
  return "loop";
}

const char* toString(FxAlignment alignment) {
  return alignment == FxAlignment::Left ? "left" : "right";
}

std::optional<PhraseLabel> parsePhraseLabel(std::string_view text) {
  static constexpr std::array<std::pair<const char*, PhraseLabel>, 6> table = {{
      {"intro", PhraseLabel::Intro},
      {"verse", PhraseLabel::Verse},
      {"pre_chorus", PhraseLabel::PreChorus},
      {"chorus", PhraseLabel::Chorus},
      {"bridge", PhraseLabel::Bridge},
      {"outro", PhraseLabel::Outro},
  }};
  return parseEnum(text, table);
}

std::optional<TrackKind> parseTrackKind(std::string_view text) {
  static constexpr std::array<std::pair<const char*, TrackKind>, 2> table = {{
      {"midi", TrackKind::Midi},
      {"audio", TrackKind::Audio},
  }};
  return parseEnum(text, table);
}

std::optional<MidiContentType> parseMidiContentType(std::string_view text) {
  static constexpr std::array<std::pair<const char*, MidiContentType>, 4> table = {{
      {"chord", MidiContentType::Chord},
      {"bass", MidiContentType::Bass},
      {"melody", MidiContentType::Melody},
      {"arpeggio", MidiContentType::Arpeggio},
  }};
  return parseEnum(text, table);
}

std::optional<KeyMode> parseKeyMode(std::string_view text) {
  static constexpr std::array<std::pair<const char*, KeyMode>, 2> table = {{
      {"major", KeyMode::Major},
      {"minor", KeyMode::Minor},
  }};
  return parseEnum(text, table);
}

std::optional<AudioSampleType> parseAudioSampleType(std::string_view text) {
  static constexpr std::array<std::pair<const char*, AudioSampleType>, 2> table = {{
      {"loop", AudioSampleType::Loop},
      {"one_shot", AudioSampleType::OneShot},
  }};
  return parseEnum(text, table);
}

std::optional<TransformSubclass> parseTransformSubclass(std::string_view text) {
  static constexpr std::array<std::pair<const char*, TransformSubclass>, 3> table = {{
      {"general", TransformSubclass::General},
      {"drum", TransformSubclass::Drum},
      {"fx", TransformSubclass::Fx},
  }};
  return parseEnum(text, table);
}

std::optional<LoopMode> parseLoopMode(std::string_view text) {
  static constexpr std::array<std::pair<const char*, LoopMode>, 3> table = {{
      {"once", LoopMode::Once},
      {"loop", LoopMode::Loop},
      {"trim", LoopMode::Trim},
  }};
  return parseEnum(text, table);
}

std::optional<FxAlignment> parseFxAlignment(std::string_view text) {
  static constexpr std::array<std::pair<const char*, FxAlignment>, 2> table = {{
      {"left", FxAlignment::Left},
      {"right", FxAlignment::Right},
  }};
  return parseEnum(text, table);
}

std::string actionSequenceToString(const std::vector<ActionSymbol>& seq) {
  std::string out;
  out.reserve(seq.size());
  for (ActionSymbol symbol : seq) {
    switch (symbol) {
      case ActionSymbol::Onset: out.push_back('O'); break;
      case ActionSymbol::Sustain: out.push_back('S'); break;
      case ActionSymbol::Rest: out.push_back('R'); break;
    }
  }
  return out;
}

std::optional<std::vector<ActionSymbol>> parseActionSequence(std::string_view text) {
  std::vector<ActionSymbol> seq;
  seq.reserve(text.size());
  for (char c : text) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'O': seq.push_back(ActionSymbol::Onset); break;
      case 'S': seq.push_back(ActionSymbol::Sustain); break;
      case 'R': seq.push_back(ActionSymbol::Rest); break;
      default: return std::nullopt;
    }
  }
  return seq;
}

const std::string& clipName(const ClipSpec& clip) {
  return std::visit([](const auto& c) -> const std::string& { return c.name; }, clip);
}

TrackKind clipKind(const ClipSpec& clip) {
  return std::holds_alternative<MidiClipSpec>(clip) ? TrackKind::Midi
                                                    : TrackKind::Audio;
}

}  // namespace tomi
