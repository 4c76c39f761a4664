#include "tomi/doc/document_io.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "tomi/core/link_check.h"

namespace tomi {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

const char* toString(IssueCode code) {
  switch (code) {
    case IssueCode::Syntax: return "E_SYNTAX";
    case IssueCode::DupName: return "E_DUP_NAME";
    case IssueCode::UnknownRef: return "E_UNKNOWN_REF";
    case IssueCode::TypeMismatch: return "E_TYPE_MISMATCH";
    case IssueCode::BadDuration: return "E_BAD_DURATION";
    case IssueCode::BadLabel: return "E_BAD_LABEL";
    case IssueCode::BadActionSeq: return "E_BAD_ACTION_SEQ";
    case IssueCode::FxMismatch: return "E_FX_MISMATCH";
    case IssueCode::BadKey: return "E_BAD_KEY";
    case IssueCode::BadTempo: return "E_BAD_TEMPO";
    case IssueCode::EmptySequence: return "E_EMPTY_SEQUENCE";
    case IssueCode::OrphanNode: return "E_ORPHAN_NODE";
  }
  return "E_SYNTAX";
}

bool isWarning(IssueCode code) { return code == IssueCode::OrphanNode; }

int ValidationReport::blockingCount() const {
  int count = 0;
  for (const auto& issue : issues) {
    if (!isWarning(issue.code)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class DocumentParser {
 public:
  ParseResult run(std::string_view text) {
    json root;
    try {
      root = json::parse(text);
    } catch (const json::parse_error& err) {
      addStructural(IssueCode::Syntax, "document", err.what());
      return finish();
    }
    if (!root.is_object()) {
      addStructural(IssueCode::Syntax, "document", "top level must be an object");
      return finish();
    }

    checkKeys(root, "document",
              {"version", "tempo_bpm", "key_root", "key_mode", "sections",
               "tracks", "clips", "transformations", "section_sequence",
               "links"});

    if (auto version = requireInt(root, "version", "document"); version) {
      if (*version != kSchemaVersion) {
        addStructural(IssueCode::Syntax, "version",
                      "unsupported schema version " + std::to_string(*version));
      }
    }

    if (auto tempo = requireNumber(root, "tempo_bpm", "document"); tempo) {
      doc_.tempo_bpm = *tempo;
    }
    if (auto key_root = requireInt(root, "key_root", "document"); key_root) {
      doc_.key.root = static_cast<int>(*key_root);
    }
    if (auto mode = requireString(root, "key_mode", "document"); mode) {
      if (auto parsed = parseKeyMode(*mode); parsed) {
        doc_.key.mode = *parsed;
      } else {
        addStructural(IssueCode::BadKey, "key_mode",
                      "unknown key mode \"" + *mode + "\" (major|minor)");
      }
    }

    parseArray(root, "sections", [this](const json& item, const std::string& path) {
      parseSection(item, path);
    });
    parseArray(root, "tracks", [this](const json& item, const std::string& path) {
      parseTrack(item, path);
    });
    parseArray(root, "clips", [this](const json& item, const std::string& path) {
      parseClip(item, path);
    });
    parseArray(root, "transformations",
               [this](const json& item, const std::string& path) {
                 parseTransform(item, path);
               });

    if (auto it = root.find("section_sequence"); it == root.end()) {
      addStructural(IssueCode::Syntax, "section_sequence", "missing field");
    } else if (!it->is_array()) {
      addStructural(IssueCode::Syntax, "section_sequence", "must be an array");
    } else {
      for (size_t i = 0; i < it->size(); ++i) {
        const json& entry = (*it)[i];
        std::string path = "section_sequence[" + std::to_string(i) + "]";
        if (!entry.is_string()) {
          addStructural(IssueCode::Syntax, path, "entries must be section names");
          continue;
        }
        doc_.section_sequence.push_back(entry.get<std::string>());
      }
    }

    parseArray(root, "links", [this](const json& item, const std::string& path) {
      parseLink(item, path);
    });

    return finish();
  }

 private:
  ParseResult finish() {
    ParseResult result;
    result.issues = std::move(issues_);
    if (!structural_failure_) result.doc = std::move(doc_);
    return result;
  }

  void add(IssueCode code, std::string path, std::string message) {
    issues_.push_back({code, std::move(path), std::move(message)});
  }

  // Issues that prevent the text from mapping onto a document at all.
  void addStructural(IssueCode code, std::string path, std::string message) {
    structural_failure_ = true;
    add(code, std::move(path), std::move(message));
  }

  void checkKeys(const json& obj, const std::string& path,
                 std::set<std::string> allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!allowed.contains(key)) {
        addStructural(IssueCode::Syntax, path + "." + key, "unknown field");
      }
    }
  }

  std::optional<std::string> requireString(const json& obj, const char* key,
                                           const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      addStructural(IssueCode::Syntax, path + "." + key, "missing field");
      return std::nullopt;
    }
    if (!it->is_string()) {
      addStructural(IssueCode::Syntax, path + "." + key, "must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<int64_t> requireInt(const json& obj, const char* key,
                                    const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      addStructural(IssueCode::Syntax, path + "." + key, "missing field");
      return std::nullopt;
    }
    if (!it->is_number_integer()) {
      addStructural(IssueCode::Syntax, path + "." + key, "must be an integer");
      return std::nullopt;
    }
    return it->get<int64_t>();
  }

  std::optional<double> requireNumber(const json& obj, const char* key,
                                      const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      addStructural(IssueCode::Syntax, path + "." + key, "missing field");
      return std::nullopt;
    }
    if (!it->is_number()) {
      addStructural(IssueCode::Syntax, path + "." + key, "must be a number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<int64_t> optionalInt(const json& obj, const char* key,
                                     const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number_integer()) {
      addStructural(IssueCode::Syntax, path + "." + key, "must be an integer");
      return std::nullopt;
    }
    return it->get<int64_t>();
  }

  template <typename Fn>
  void parseArray(const json& root, const char* key, Fn&& per_item) {
    auto it = root.find(key);
    if (it == root.end()) {
      addStructural(IssueCode::Syntax, key, "missing field");
      return;
    }
    if (!it->is_array()) {
      addStructural(IssueCode::Syntax, key, "must be an array");
      return;
    }
    for (size_t i = 0; i < it->size(); ++i) {
      const json& item = (*it)[i];
      std::string path = std::string(key) + "[" + std::to_string(i) + "]";
      if (!item.is_object()) {
        addStructural(IssueCode::Syntax, path, "must be an object");
        continue;
      }
      per_item(item, path);
    }
  }

  /// Registers a node name; returns false (and reports) on duplicates.
  bool claimName(const std::string& name, const std::string& category) {
    if (name.empty()) {
      addStructural(IssueCode::Syntax, category, "node name must be non-empty");
      return false;
    }
    auto [it, inserted] = claimed_.emplace(name, category);
    if (!inserted) {
      add(IssueCode::DupName, category + "." + name,
          "name \"" + name + "\" already used by " + it->second + "." + name);
      return false;
    }
    return true;
  }

  void parseSection(const json& item, const std::string& path) {
    checkKeys(item, path, {"name", "label", "length_bars"});
    auto name = requireString(item, "name", path);
    auto label_text = requireString(item, "label", path);
    auto length = requireInt(item, "length_bars", path);
    if (!name || !label_text || !length) return;

    SectionNode node;
    node.name = *name;
    node.length_bars = static_cast<int>(*length);
    if (auto label = parsePhraseLabel(*label_text); label) {
      node.label = *label;
    } else {
      addStructural(IssueCode::BadLabel, path + ".label",
                    "unknown phrase label \"" + *label_text +
                        "\" (intro|verse|pre_chorus|chorus|bridge|outro)");
      return;
    }
    if (!claimName(node.name, "sections")) return;
    std::string key = node.name;
    doc_.sections.emplace(std::move(key), std::move(node));
  }

  void parseTrack(const json& item, const std::string& path) {
    checkKeys(item, path, {"name", "kind"});
    auto name = requireString(item, "name", path);
    auto kind_text = requireString(item, "kind", path);
    if (!name || !kind_text) return;

    TrackNode node;
    node.name = *name;
    if (auto kind = parseTrackKind(*kind_text); kind) {
      node.kind = *kind;
    } else {
      addStructural(IssueCode::Syntax, path + ".kind",
                    "unknown track kind \"" + *kind_text + "\" (midi|audio)");
      return;
    }
    if (!claimName(node.name, "tracks")) return;
    std::string key = node.name;
    doc_.tracks.emplace(std::move(key), std::move(node));
  }

  void parseClip(const json& item, const std::string& path) {
    auto kind_text = requireString(item, "kind", path);
    if (!kind_text) return;
    if (*kind_text == "midi") {
      parseMidiClip(item, path);
    } else if (*kind_text == "audio") {
      parseAudioClip(item, path);
    } else {
      addStructural(IssueCode::Syntax, path + ".kind",
                    "unknown clip kind \"" + *kind_text + "\" (midi|audio)");
    }
  }

  void parseMidiClip(const json& item, const std::string& path) {
    checkKeys(item, path,
              {"name", "kind", "content_type", "length_bars", "key_root",
               "mode", "root_progression"});
    auto name = requireString(item, "name", path);
    auto content_text = requireString(item, "content_type", path);
    auto length = requireInt(item, "length_bars", path);
    if (!name || !content_text || !length) return;

    MidiClipSpec clip;
    clip.name = *name;
    clip.length_bars = static_cast<int>(*length);
    if (auto content = parseMidiContentType(*content_text); content) {
      clip.content_type = *content;
    } else {
      addStructural(IssueCode::Syntax, path + ".content_type",
                    "unknown content type \"" + *content_text +
                        "\" (chord|bass|melody|arpeggio)");
      return;
    }
    if (auto key_root = optionalInt(item, "key_root", path); key_root) {
      clip.key_root = static_cast<int>(*key_root);
    }
    if (auto it = item.find("mode"); it != item.end()) {
      if (!it->is_string()) {
        addStructural(IssueCode::Syntax, path + ".mode", "must be a string");
      } else if (auto mode = parseKeyMode(it->get<std::string>()); mode) {
        clip.mode = *mode;
      } else {
        addStructural(IssueCode::BadKey, path + ".mode",
                      "unknown mode \"" + it->get<std::string>() +
                          "\" (major|minor)");
      }
    }
    if (auto it = item.find("root_progression"); it != item.end()) {
      if (!it->is_array()) {
        addStructural(IssueCode::Syntax, path + ".root_progression",
                      "must be an array of scale degrees");
      } else {
        std::vector<int> degrees;
        bool bad = false;
        for (const json& degree : *it) {
          if (!degree.is_number_integer()) {
            addStructural(IssueCode::Syntax, path + ".root_progression",
                          "degrees must be integers");
            bad = true;
            break;
          }
          degrees.push_back(degree.get<int>());
        }
        if (!bad) clip.root_progression = std::move(degrees);
      }
    }
    if (!claimName(clip.name, "clips")) return;
    std::string key = clip.name;
    doc_.clips.emplace(std::move(key), ClipSpec{std::move(clip)});
  }

  void parseAudioClip(const json& item, const std::string& path) {
    checkKeys(item, path,
              {"name", "kind", "sample_type", "keywords", "length_bars"});
    auto name = requireString(item, "name", path);
    auto type_text = requireString(item, "sample_type", path);
    if (!name || !type_text) return;

    AudioClipSpec clip;
    clip.name = *name;
    if (auto type = parseAudioSampleType(*type_text); type) {
      clip.sample_type = *type;
    } else {
      addStructural(IssueCode::Syntax, path + ".sample_type",
                    "unknown sample type \"" + *type_text + "\" (loop|one_shot)");
      return;
    }
    if (auto it = item.find("keywords"); it == item.end()) {
      addStructural(IssueCode::Syntax, path + ".keywords", "missing field");
      return;
    } else if (!it->is_array()) {
      addStructural(IssueCode::Syntax, path + ".keywords", "must be an array");
      return;
    } else {
      for (const json& keyword : *it) {
        if (!keyword.is_string()) {
          addStructural(IssueCode::Syntax, path + ".keywords",
                        "keywords must be strings");
          return;
        }
        clip.keywords.push_back(lowered(keyword.get<std::string>()));
      }
    }
    if (auto length = optionalInt(item, "length_bars", path); length) {
      clip.length_bars = static_cast<int>(*length);
    }
    if (!claimName(clip.name, "clips")) return;
    std::string key = clip.name;
    doc_.clips.emplace(std::move(key), ClipSpec{std::move(clip)});
  }

  void parseTransform(const json& item, const std::string& path) {
    checkKeys(item, path,
              {"name", "subclass", "action_sequence", "loop_mode", "alignment"});
    auto name = requireString(item, "name", path);
    auto subclass_text = requireString(item, "subclass", path);
    auto loop_text = requireString(item, "loop_mode", path);
    if (!name || !subclass_text || !loop_text) return;

    TransformationNode node;
    node.name = *name;
    if (auto subclass = parseTransformSubclass(*subclass_text); subclass) {
      node.subclass = *subclass;
    } else {
      addStructural(IssueCode::Syntax, path + ".subclass",
                    "unknown subclass \"" + *subclass_text +
                        "\" (general|drum|fx)");
      return;
    }
    if (auto loop_mode = parseLoopMode(*loop_text); loop_mode) {
      node.loop_mode = *loop_mode;
    } else {
      addStructural(IssueCode::Syntax, path + ".loop_mode",
                    "unknown loop mode \"" + *loop_text + "\" (once|loop|trim)");
      return;
    }
    if (auto it = item.find("action_sequence"); it != item.end()) {
      if (!it->is_string()) {
        addStructural(IssueCode::Syntax, path + ".action_sequence",
                      "must be a string of O/S/R symbols");
        return;
      }
      if (auto seq = parseActionSequence(it->get<std::string>()); seq) {
        node.action_sequence = std::move(*seq);
      } else {
        addStructural(IssueCode::BadActionSeq, path + ".action_sequence",
                      "only symbols O (onset), S (sustain), R (rest) allowed");
        return;
      }
    }
    if (auto it = item.find("alignment"); it != item.end()) {
      if (!it->is_string()) {
        addStructural(IssueCode::Syntax, path + ".alignment", "must be a string");
        return;
      }
      if (auto alignment = parseFxAlignment(it->get<std::string>()); alignment) {
        node.alignment = *alignment;
      } else {
        addStructural(IssueCode::Syntax, path + ".alignment",
                      "unknown alignment \"" + it->get<std::string>() +
                          "\" (left|right)");
        return;
      }
    }
    if (!claimName(node.name, "transformations")) return;
    std::string key = node.name;
    doc_.transforms.emplace(std::move(key), std::move(node));
  }

  void parseLink(const json& item, const std::string& path) {
    checkKeys(item, path, {"section", "track", "clip", "transformation"});
    auto section = requireString(item, "section", path);
    auto track = requireString(item, "track", path);
    auto clip = requireString(item, "clip", path);
    auto transform = requireString(item, "transformation", path);
    if (!section || !track || !clip || !transform) return;
    doc_.links.push_back({*section, *track, *clip, *transform});
  }

  TomiDocument doc_;
  std::vector<ValidationIssue> issues_;
  std::map<std::string, std::string> claimed_;  // name -> category
  bool structural_failure_ = false;
};

}  // namespace

ParseResult parseDocument(std::string_view text) {
  return DocumentParser().run(text);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string serializeDocument(const TomiDocument& doc) {
  ordered_json root;
  root["version"] = kSchemaVersion;
  root["tempo_bpm"] = doc.tempo_bpm;
  root["key_root"] = doc.key.root;
  root["key_mode"] = toString(doc.key.mode);

  ordered_json sections = ordered_json::array();
  for (const auto& [name, section] : doc.sections) {
    ordered_json item;
    item["name"] = section.name;
    item["label"] = toString(section.label);
    item["length_bars"] = section.length_bars;
    sections.push_back(std::move(item));
  }
  root["sections"] = std::move(sections);

  ordered_json tracks = ordered_json::array();
  for (const auto& [name, track] : doc.tracks) {
    ordered_json item;
    item["name"] = track.name;
    item["kind"] = toString(track.kind);
    tracks.push_back(std::move(item));
  }
  root["tracks"] = std::move(tracks);

  ordered_json clips = ordered_json::array();
  for (const auto& [name, clip] : doc.clips) {
    ordered_json item;
    if (const auto* midi = std::get_if<MidiClipSpec>(&clip)) {
      item["name"] = midi->name;
      item["kind"] = "midi";
      item["content_type"] = toString(midi->content_type);
      item["length_bars"] = midi->length_bars;
      if (midi->key_root) item["key_root"] = *midi->key_root;
      if (midi->mode) item["mode"] = toString(*midi->mode);
      if (midi->root_progression) item["root_progression"] = *midi->root_progression;
    } else {
      const auto& audio = std::get<AudioClipSpec>(clip);
      item["name"] = audio.name;
      item["kind"] = "audio";
      item["sample_type"] = toString(audio.sample_type);
      item["keywords"] = audio.keywords;
      if (audio.length_bars) item["length_bars"] = *audio.length_bars;
    }
    clips.push_back(std::move(item));
  }
  root["clips"] = std::move(clips);

  ordered_json transforms = ordered_json::array();
  for (const auto& [name, transform] : doc.transforms) {
    ordered_json item;
    item["name"] = transform.name;
    item["subclass"] = toString(transform.subclass);
    item["action_sequence"] = actionSequenceToString(transform.action_sequence);
    item["loop_mode"] = toString(transform.loop_mode);
    if (transform.alignment) item["alignment"] = toString(*transform.alignment);
    transforms.push_back(std::move(item));
  }
  root["transformations"] = std::move(transforms);

  root["section_sequence"] = doc.section_sequence;

  ordered_json links = ordered_json::array();
  for (const CompositionLink& link : doc.links) {
    ordered_json item;
    item["section"] = link.section_ref;
    item["track"] = link.track_ref;
    item["clip"] = link.clip_ref;
    item["transformation"] = link.transform_ref;
    links.push_back(std::move(item));
  }
  root["links"] = std::move(links);

  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

class DocumentValidator {
 public:
  explicit DocumentValidator(const TomiDocument& doc) : doc_(doc) {}

  ValidationReport run() {
    checkGlobals();
    checkCrossMapNames();
    checkSections();
    checkClips();
    checkTransforms();
    checkSequence();
    checkLinks();
    checkOrphans();
    return std::move(report_);
  }

 private:
  void add(IssueCode code, std::string path, std::string message) {
    report_.issues.push_back({code, std::move(path), std::move(message)});
  }

  void checkGlobals() {
    if (!(doc_.tempo_bpm >= 40.0 && doc_.tempo_bpm <= 300.0)) {
      add(IssueCode::BadTempo, "tempo_bpm",
          "tempo must be within [40, 300] BPM");
    }
    if (doc_.key.root < 0 || doc_.key.root > 11) {
      add(IssueCode::BadKey, "key_root", "key root must be a pitch class 0-11");
    }
  }

  void checkCrossMapNames() {
    std::map<std::string, std::string> seen;
    auto claim = [&](const std::string& name, const char* category) {
      auto [it, inserted] = seen.emplace(name, category);
      if (!inserted) {
        add(IssueCode::DupName, std::string(category) + "." + name,
            "name \"" + name + "\" already used by " + it->second + "." + name);
      }
    };
    for (const auto& [name, node] : doc_.sections) claim(name, "sections");
    for (const auto& [name, node] : doc_.tracks) claim(name, "tracks");
    for (const auto& [name, node] : doc_.clips) claim(name, "clips");
    for (const auto& [name, node] : doc_.transforms) claim(name, "transformations");
  }

  void checkSections() {
    for (const auto& [name, section] : doc_.sections) {
      if (section.length_bars < 1 || section.length_bars > 64) {
        add(IssueCode::BadDuration, "sections." + name + ".length_bars",
            "section length must be within [1, 64] bars");
      }
    }
  }

  void checkClips() {
    for (const auto& [name, clip] : doc_.clips) {
      if (const auto* midi = std::get_if<MidiClipSpec>(&clip)) {
        if (midi->length_bars != 4 && midi->length_bars != 8 &&
            midi->length_bars != 16) {
          add(IssueCode::BadDuration, "clips." + name + ".length_bars",
              "MIDI clip length must be 4, 8, or 16 bars");
        }
        if (midi->key_root && (*midi->key_root < 0 || *midi->key_root > 11)) {
          add(IssueCode::BadKey, "clips." + name + ".key_root",
              "key root must be a pitch class 0-11");
        }
        if (midi->root_progression) {
          if (midi->root_progression->empty()) {
            add(IssueCode::EmptySequence, "clips." + name + ".root_progression",
                "root progression must not be empty when present");
          }
          for (int degree : *midi->root_progression) {
            if (degree < 1 || degree > 7) {
              add(IssueCode::BadKey, "clips." + name + ".root_progression",
                  "scale degrees must be within [1, 7]");
              break;
            }
          }
        }
      } else {
        const auto& audio = std::get<AudioClipSpec>(clip);
        if (audio.keywords.empty()) {
          add(IssueCode::EmptySequence, "clips." + name + ".keywords",
              "audio clips need at least one keyword");
        }
        if (audio.sample_type == AudioSampleType::Loop) {
          if (!audio.length_bars) {
            add(IssueCode::BadDuration, "clips." + name + ".length_bars",
                "loops must declare length_bars (2, 4, 8, or 16)");
          } else if (*audio.length_bars != 2 && *audio.length_bars != 4 &&
                     *audio.length_bars != 8 && *audio.length_bars != 16) {
            add(IssueCode::BadDuration, "clips." + name + ".length_bars",
                "loop length must be 2, 4, 8, or 16 bars");
          }
        } else if (audio.length_bars) {
          add(IssueCode::BadDuration, "clips." + name + ".length_bars",
              "one-shot clips must not declare length_bars");
        }
      }
    }
  }

  void checkTransforms() {
    for (const auto& [name, transform] : doc_.transforms) {
      const std::string base = "transformations." + name;
      if (transform.subclass == TransformSubclass::Fx) {
        if (!transform.alignment) {
          add(IssueCode::FxMismatch, base + ".alignment",
              "fx transforms require alignment (left|right)");
        }
        if (!transform.action_sequence.empty()) {
          add(IssueCode::FxMismatch, base + ".action_sequence",
              "fx transforms must not carry an action sequence");
        }
        if (transform.loop_mode == LoopMode::Loop) {
          add(IssueCode::FxMismatch, base + ".loop_mode",
              "fx transforms must not loop (once|trim)");
        }
      } else {
        if (transform.alignment) {
          add(IssueCode::FxMismatch, base + ".alignment",
              "alignment is only valid on fx transforms");
        }
        if (transform.action_sequence.empty()) {
          add(IssueCode::BadActionSeq, base + ".action_sequence",
              "general/drum transforms need a non-empty action sequence");
        } else {
          bool sounding = false;
          for (size_t i = 0; i < transform.action_sequence.size(); ++i) {
            ActionSymbol symbol = transform.action_sequence[i];
            if (symbol == ActionSymbol::Sustain && !sounding) {
              add(IssueCode::BadActionSeq, base + ".action_sequence",
                  "sustain at step " + std::to_string(i) +
                      " must follow an onset or sustain");
              break;
            }
            sounding = symbol != ActionSymbol::Rest;
          }
        }
      }
    }
  }

  void checkSequence() {
    if (doc_.section_sequence.empty()) {
      add(IssueCode::EmptySequence, "section_sequence",
          "section sequence must not be empty");
    }
    for (size_t i = 0; i < doc_.section_sequence.size(); ++i) {
      const std::string& name = doc_.section_sequence[i];
      if (!doc_.sections.contains(name)) {
        add(IssueCode::UnknownRef, "section_sequence[" + std::to_string(i) + "]",
            "sequence entry names unknown section \"" + name + "\"");
      }
    }
  }

  void checkLinks() {
    for (size_t i = 0; i < doc_.links.size(); ++i) {
      const CompositionLink& link = doc_.links[i];
      const std::string base = "links[" + std::to_string(i) + "]";
      const std::string quad = "(" + link.section_ref + ", " + link.track_ref +
                               ", " + link.clip_ref + ", " + link.transform_ref +
                               ")";
      for (LinkViolation violation : checkLinkCompat(doc_, link)) {
        switch (violation) {
          case LinkViolation::UnknownSection:
            add(IssueCode::UnknownRef, base + ".section",
                "link " + quad + " references unknown section \"" +
                    link.section_ref + "\"");
            break;
          case LinkViolation::UnknownTrack:
            add(IssueCode::UnknownRef, base + ".track",
                "link " + quad + " references unknown track \"" +
                    link.track_ref + "\"");
            break;
          case LinkViolation::UnknownClip:
            add(IssueCode::UnknownRef, base + ".clip",
                "link " + quad + " references unknown clip \"" + link.clip_ref +
                    "\"");
            break;
          case LinkViolation::UnknownTransform:
            add(IssueCode::UnknownRef, base + ".transformation",
                "link " + quad + " references unknown transformation \"" +
                    link.transform_ref + "\"");
            break;
          case LinkViolation::TypeMismatch:
            add(IssueCode::TypeMismatch, base,
                "link " + quad + " pairs a clip with a track of the other kind");
            break;
          case LinkViolation::FxRequiresAudio:
            add(IssueCode::FxMismatch, base,
                "link " + quad + " applies an fx transform to a MIDI clip");
            break;
          case LinkViolation::DrumRequiresOneShot:
            add(IssueCode::TypeMismatch, base,
                "link " + quad + " applies a drum transform to an audio loop");
            break;
        }
      }
    }
  }

  void checkOrphans() {
    std::set<std::string> used;
    for (const std::string& name : doc_.section_sequence) used.insert(name);
    for (const CompositionLink& link : doc_.links) {
      used.insert(link.section_ref);
      used.insert(link.track_ref);
      used.insert(link.clip_ref);
      used.insert(link.transform_ref);
    }
    auto warn = [&](const std::string& name, const char* category) {
      if (!used.contains(name)) {
        add(IssueCode::OrphanNode, std::string(category) + "." + name,
            std::string(category) + " node \"" + name +
                "\" is never referenced by a link or the sequence");
      }
    };
    for (const auto& [name, node] : doc_.sections) warn(name, "sections");
    for (const auto& [name, node] : doc_.tracks) warn(name, "tracks");
    for (const auto& [name, node] : doc_.clips) warn(name, "clips");
    for (const auto& [name, node] : doc_.transforms) warn(name, "transformations");
  }

  const TomiDocument& doc_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const TomiDocument& doc) {
  return DocumentValidator(doc).run();
}

LoadResult loadDocument(std::string_view text) {
  LoadResult result;
  ParseResult parsed = parseDocument(text);
  result.report.issues = parsed.issues;
  if (parsed.doc) {
    ValidationReport checked = validate(*parsed.doc);
    for (auto& issue : checked.issues) {
      bool duplicate = false;
      for (const auto& existing : result.report.issues) {
        if (existing.code == issue.code && existing.path == issue.path) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) result.report.issues.push_back(std::move(issue));
    }
    result.doc = std::move(parsed.doc);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Error report rendering
// ---------------------------------------------------------------------------

std::string renderErrorReport(const ValidationReport& report) {
  if (report.issues.empty()) {
    throw std::invalid_argument("cannot render an empty report");
  }
  std::vector<ValidationIssue> sorted = report.issues;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ValidationIssue& a, const ValidationIssue& b) {
                     if (a.path != b.path) return a.path < b.path;
                     return static_cast<int>(a.code) < static_cast<int>(b.code);
                   });

  std::ostringstream out;
  if (report.blockingCount() == 0) {
    out << "no blocking errors (warnings only)\n";
  }
  for (const ValidationIssue& issue : sorted) {
    out << toString(issue.code) << " at " << issue.path << ": " << issue.message
        << "\n";
  }
  return out.str();
}

}  // namespace tomi
