#include "tomi/cli/app.h"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tomi/arrange/arranger.h"
#include "tomi/db/sample_db.h"
#include "tomi/doc/document_io.h"
#include "tomi/gen/backend.h"
#include "tomi/gen/random_gen.h"
#include "tomi/gen/repair_loop.h"
#include "tomi/ils/ils.h"
#include "tomi/render/renderer.h"
#include "tomi/util/file_io.h"

namespace fs = std::filesystem;

namespace tomi::cli {

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kIoFailure = 2;
constexpr int kUsage = 64;

struct CommonOptions {
  std::string midi_db;
  std::string audio_db;
  uint64_t seed = 0;
};

std::optional<TomiDocument> loadDocFile(const std::string& path, int* exit_code) {
  auto text = readTextFile(path);
  if (!text) {
    std::cerr << "cannot read " << path << "\n";
    *exit_code = kIoFailure;
    return std::nullopt;
  }
  LoadResult loaded = loadDocument(*text);
  if (!loaded.report.issues.empty()) {
    std::cerr << renderErrorReport(loaded.report);
  }
  if (!loaded.doc || !loaded.report.isValid()) {
    *exit_code = kValidationFailure;
    return std::nullopt;
  }
  return loaded.doc;
}

std::optional<SampleDb> openDb(const std::string& path, int* exit_code) {
  std::string error;
  auto db = SampleDb::open(path, &error);
  if (!db) {
    std::cerr << "cannot open database " << path << ": " << error << "\n";
    *exit_code = kIoFailure;
  }
  return db;
}

nlohmann::ordered_json bindingJson(const SampleBinding& binding) {
  nlohmann::ordered_json out;
  if (const auto* midi = std::get_if<MidiSampleRow>(&binding)) {
    out["kind"] = "midi";
    out["path"] = midi->path;
    out["content_type"] = toString(midi->content_type);
    out["length_bars"] = midi->length_bars;
    out["key_root"] = midi->key_root;
    out["mode"] = toString(midi->mode);
  } else {
    const auto& audio = std::get<AudioSampleRow>(binding);
    out["kind"] = "audio";
    out["path"] = audio.path;
    out["sample_type"] = toString(audio.sample_type);
    out["duration_seconds"] = audio.duration_seconds;
    if (audio.length_bars) out["length_bars"] = *audio.length_bars;
    if (audio.source_bpm) out["source_bpm"] = *audio.source_bpm;
  }
  return out;
}

std::string resolvedToJson(const ResolvedDocument& resolved) {
  nlohmann::ordered_json out;
  out["bindings"] = nlohmann::ordered_json::object();
  for (const auto& [clip, binding] : resolved.bindings) {
    out["bindings"][clip] = bindingJson(binding);
  }
  out["discarded_clips"] = resolved.discarded_clips;
  out["discarded_links"] = resolved.discarded_links;
  return out.dump(2) + "\n";
}

std::string arrangementToJson(const Arrangement& arrangement) {
  nlohmann::ordered_json out;
  out["tempo_bpm"] = arrangement.tempo_bpm;
  out["total_bars"] = arrangement.timeline.total_bars;
  out["timeline"] = nlohmann::ordered_json::array();
  for (const SectionInstance& instance : arrangement.timeline.instances) {
    out["timeline"].push_back({{"section", instance.section},
                               {"occurrence", instance.occurrence},
                               {"start_bar", instance.start_bar},
                               {"length_bars", instance.length_bars},
                               {"label", toString(instance.label)}});
  }
  out["midi_placements"] = nlohmann::ordered_json::array();
  for (const PlacedMidiClip& placement : arrangement.midi_placements) {
    out["midi_placements"].push_back({{"track", placement.track},
                                      {"instance", placement.instance_index},
                                      {"notes", placement.notes.size()}});
  }
  out["audio_placements"] = nlohmann::ordered_json::array();
  for (const PlacedAudioClip& placement : arrangement.audio_placements) {
    out["audio_placements"].push_back(
        {{"track", placement.track},
         {"instance", placement.instance_index},
         {"path", placement.region.path},
         {"start_seconds", placement.region.start_seconds},
         {"region_seconds", placement.region.region_seconds}});
  }
  return out.dump(2) + "\n";
}

Timeline timelineFromConstraints(const std::vector<SectionConstraint>& sequence) {
  TomiDocument doc;
  for (const SectionConstraint& constraint : sequence) {
    doc.sections.emplace(constraint.name,
                         SectionNode{constraint.name, constraint.label,
                                     constraint.length_bars});
    doc.section_sequence.push_back(constraint.name);
  }
  return buildTimeline(doc);
}

int writeIlsArtifacts(const SongIlsResult& ils, const MelParams& params,
                      const std::string& report_path,
                      const std::string& ms_image_path,
                      const std::string& wf_image_path) {
  if (!ils.ok) {
    std::cerr << "ILS evaluation failed: " << ils.error << "\n";
    return kIoFailure;
  }
  if (!writeTextFile(report_path, formatIlsReport(ils, params)) ||
      !exportMatrixImage(ils.mel_matrix, ils.labels, ms_image_path) ||
      !exportMatrixImage(ils.waveform_matrix, ils.labels, wf_image_path)) {
    std::cerr << "cannot write ILS artifacts\n";
    return kIoFailure;
  }
  std::cerr << "ILS^MS " << ils.mel.ils << "  ILS^WF " << ils.waveform.ils
            << "\n";
  return kOk;
}

/// generate / pipeline shared document production.
int produceDocument(const std::string& backend, const std::string& in_file,
                    const std::string& mock_file, const GenerationContext& ctx,
                    const RandomGenConfig& gen_config, uint64_t seed,
                    int max_attempts, TomiDocument* out_doc) {
  if (backend == "random") {
    if (!ctx.section_sequence) {
      std::cerr << "--sequence is required for the random backend\n";
      return kUsage;
    }
    *out_doc = randomGenerate(ctx, gen_config, seed);
    return kOk;
  }
  if (backend == "file") {
    if (in_file.empty()) {
      std::cerr << "--in is required for the file backend\n";
      return kUsage;
    }
    int exit_code = kOk;
    auto doc = loadDocFile(in_file, &exit_code);
    if (!doc) return exit_code;
    *out_doc = *doc;
    return kOk;
  }
  if (backend == "llm") {
    std::unique_ptr<ChatBackend> chat;
    if (!mock_file.empty()) {
      chat = ScriptedBackend::fromFile(mock_file);
      if (!chat) {
        std::cerr << "cannot read mock transcript " << mock_file << "\n";
        return kIoFailure;
      }
    } else {
      chat = HttpBackend::fromEnvironment();
      if (!chat) {
        std::cerr << "set TOMI_API_URL (and TOMI_API_KEY) to use the llm "
                     "backend\n";
        return kUsage;
      }
    }
    const std::string problem = contextProblem(ctx);
    if (!problem.empty()) {
      std::cerr << "invalid generation context: " << problem << "\n";
      return kUsage;
    }
    BackendTranscript transcript = generateWithRepair(*chat, ctx, max_attempts);
    for (size_t i = 0; i < transcript.attempts.size(); ++i) {
      std::cerr << "attempt " << i + 1 << ": "
                << transcript.attempts[i].report.blockingCount()
                << " blocking issue(s)\n";
    }
    if (!transcript.ok) {
      std::cerr << transcript.error << "\n";
      return transcript.attempts.empty() ? kIoFailure : kValidationFailure;
    }
    *out_doc = *transcript.final_doc;
    return kOk;
  }
  std::cerr << "unknown backend \"" << backend << "\" (llm|random|file)\n";
  return kUsage;
}

}  // namespace

std::optional<std::vector<SectionConstraint>> parseSequenceFile(
    const std::string& path, std::string* error) {
  auto text = readTextFile(path);
  if (!text) {
    if (error != nullptr) *error = "cannot read " + path;
    return std::nullopt;
  }
  std::vector<SectionConstraint> sequence;
  std::istringstream lines(*text);
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string name;
    std::string label_text;
    int bars = 0;
    if (!(fields >> name)) continue;  // blank line
    if (name[0] == '#') continue;
    if (!(fields >> label_text >> bars)) {
      if (error != nullptr) {
        *error = path + ":" + std::to_string(line_number) +
                 ": expected 'name label bars'";
      }
      return std::nullopt;
    }
    auto label = parsePhraseLabel(label_text);
    if (!label) {
      if (error != nullptr) {
        *error = path + ":" + std::to_string(line_number) +
                 ": unknown phrase label \"" + label_text + "\"";
      }
      return std::nullopt;
    }
    sequence.push_back({name, *label, bars});
  }
  if (sequence.empty()) {
    if (error != nullptr) *error = path + ": no sections";
    return std::nullopt;
  }
  return sequence;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"TOMI composition engine"};
  app.require_subcommand(1);

  // --- ingest-midi ---------------------------------------------------------
  std::string ingest_dir;
  std::string ingest_db;
  std::string stems_dir;
  auto* ingest_midi = app.add_subcommand(
      "ingest-midi", "Analyze a MIDI directory into a sample database");
  ingest_midi->add_option("dir", ingest_dir, "MIDI directory")->required();
  ingest_midi->add_option("--db", ingest_db, "database file")->required();
  ingest_midi->add_option("--stems-dir", stems_dir, "extracted stem output");

  // --- ingest-audio --------------------------------------------------------
  std::string audio_dir;
  std::string audio_manifest;
  std::string audio_db_path;
  auto* ingest_audio = app.add_subcommand(
      "ingest-audio", "Ingest an audio directory via its tag manifest");
  ingest_audio->add_option("dir", audio_dir, "audio directory")->required();
  ingest_audio->add_option("--manifest", audio_manifest, "tag manifest")
      ->required();
  ingest_audio->add_option("--db", audio_db_path, "database file")->required();

  // --- validate ------------------------------------------------------------
  std::string validate_file;
  auto* validate_cmd =
      app.add_subcommand("validate", "Rule-validate a composition document");
  validate_cmd->add_option("file", validate_file, "document file")->required();

  // --- shared generation options --------------------------------------------
  std::string backend = "random";
  std::string sequence_file;
  std::string in_file;
  std::string mock_file;
  std::string pools_file;
  double tempo = 120.0;
  int key_root = 0;
  std::string key_mode = "minor";
  std::string mood;
  uint64_t seed = 0;
  int max_attempts = 5;
  bool relax_sequence = false;

  auto addGenOptions = [&](CLI::App* cmd) {
    cmd->add_option("--backend", backend, "llm|random|file")->required();
    cmd->add_option("--sequence", sequence_file, "section sequence file");
    cmd->add_option("--in", in_file, "input document (file backend)");
    cmd->add_option("--mock", mock_file, "scripted mock transcript (llm backend)");
    cmd->add_option("--pools", pools_file, "keyword pools config");
    cmd->add_option("--tempo", tempo, "tempo BPM");
    cmd->add_option("--key-root", key_root, "key pitch class 0-11");
    cmd->add_option("--key-mode", key_mode, "major|minor");
    cmd->add_option("--mood", mood, "mood text");
    cmd->add_option("--seed", seed, "generation seed");
    cmd->add_option("--max-attempts", max_attempts, "repair loop bound");
    cmd->add_flag("--relax-sequence", relax_sequence,
                  "allow sequences outside the 8-10 section regime");
  };

  std::string gen_out;
  auto* generate_cmd =
      app.add_subcommand("generate", "Produce a composition document");
  addGenOptions(generate_cmd);
  generate_cmd->add_option("--out", gen_out, "output document")->required();

  // --- retrieve / arrange / render ------------------------------------------
  CommonOptions common;
  std::string doc_file;
  std::string out_path;

  auto* retrieve_cmd =
      app.add_subcommand("retrieve", "Bind clips to database samples");
  retrieve_cmd->add_option("doc", doc_file, "document file")->required();
  retrieve_cmd->add_option("--midi-db", common.midi_db)->required();
  retrieve_cmd->add_option("--audio-db", common.audio_db)->required();
  retrieve_cmd->add_option("--seed", common.seed, "retrieval seed");
  retrieve_cmd->add_option("--out", out_path, "bindings JSON")->required();

  auto* arrange_cmd =
      app.add_subcommand("arrange", "Resolve links onto the timeline");
  arrange_cmd->add_option("doc", doc_file, "document file")->required();
  arrange_cmd->add_option("--midi-db", common.midi_db)->required();
  arrange_cmd->add_option("--audio-db", common.audio_db)->required();
  arrange_cmd->add_option("--seed", common.seed, "retrieval seed");
  arrange_cmd->add_option("--out", out_path, "arrangement JSON")->required();

  int sample_rate = 44100;
  auto* render_cmd =
      app.add_subcommand("render", "Render WAV, MIDI, and REAPER project");
  render_cmd->add_option("doc", doc_file, "document file")->required();
  render_cmd->add_option("--midi-db", common.midi_db)->required();
  render_cmd->add_option("--audio-db", common.audio_db)->required();
  render_cmd->add_option("--seed", common.seed, "retrieval/preset seed");
  render_cmd->add_option("--sample-rate", sample_rate, "44100 or 48000");
  render_cmd->add_option("--out", out_path, "output directory")->required();

  // --- eval-ils --------------------------------------------------------------
  std::string wav_file;
  std::string eval_sequence;
  double eval_tempo = 120.0;
  std::string eval_out = "ils_report.txt";
  auto* eval_cmd =
      app.add_subcommand("eval-ils", "Score structural consistency of a WAV");
  eval_cmd->add_option("wav", wav_file, "rendered audio")->required();
  eval_cmd->add_option("sections", eval_sequence, "section sequence file")
      ->required();
  eval_cmd->add_option("--tempo", eval_tempo, "tempo BPM");
  eval_cmd->add_option("--out", eval_out, "report file");

  // --- pipeline ---------------------------------------------------------------
  auto* pipeline_cmd = app.add_subcommand(
      "pipeline", "generate -> retrieve -> arrange -> render -> eval-ils");
  addGenOptions(pipeline_cmd);
  pipeline_cmd->add_option("--midi-db", common.midi_db)->required();
  pipeline_cmd->add_option("--audio-db", common.audio_db)->required();
  pipeline_cmd->add_option("--sample-rate", sample_rate, "44100 or 48000");
  pipeline_cmd->add_option("--out", out_path, "output directory")->required();

  std::vector<const char*> argv;
  argv.push_back("tomi");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      std::cout << app.help();
      return kOk;
    }
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  // Assemble the generation context lazily; several subcommands share it.
  auto makeContext = [&](std::string* error) -> std::optional<GenerationContext> {
    GenerationContext ctx;
    ctx.tempo_bpm = tempo;
    ctx.key.root = key_root;
    auto mode = parseKeyMode(key_mode);
    if (!mode) {
      *error = "unknown key mode \"" + key_mode + "\"";
      return std::nullopt;
    }
    ctx.key.mode = *mode;
    if (!mood.empty()) ctx.mood = mood;
    ctx.relax_sequence_limits = relax_sequence;
    if (!sequence_file.empty()) {
      auto sequence = parseSequenceFile(sequence_file, error);
      if (!sequence) return std::nullopt;
      ctx.section_sequence = std::move(sequence);
    }
    return ctx;
  };

  if (ingest_midi->parsed()) {
    int exit_code = kOk;
    auto db = openDb(ingest_db, &exit_code);
    if (!db) return exit_code;
    IngestReport report = ingestMidiDir(ingest_dir, *db, stems_dir);
    for (const std::string& skipped : report.skipped) {
      std::cerr << "skipped " << skipped << "\n";
    }
    if (!report.ok) {
      std::cerr << report.error << "\n";
      return kIoFailure;
    }
    std::cerr << report.rows_added << " row(s) added\n";
    return kOk;
  }

  if (ingest_audio->parsed()) {
    int exit_code = kOk;
    auto db = openDb(audio_db_path, &exit_code);
    if (!db) return exit_code;
    IngestReport report = ingestAudioDir(audio_dir, audio_manifest, *db);
    for (const std::string& skipped : report.skipped) {
      std::cerr << "skipped " << skipped << "\n";
    }
    if (!report.ok) {
      std::cerr << report.error << "\n";
      return kIoFailure;
    }
    std::cerr << report.rows_added << " row(s) added\n";
    return kOk;
  }

  if (validate_cmd->parsed()) {
    auto text = readTextFile(validate_file);
    if (!text) {
      std::cerr << "cannot read " << validate_file << "\n";
      return kIoFailure;
    }
    LoadResult loaded = loadDocument(*text);
    if (!loaded.report.issues.empty()) {
      std::cerr << renderErrorReport(loaded.report);
    }
    if (!loaded.doc || !loaded.report.isValid()) return kValidationFailure;
    std::cerr << "valid\n";
    return kOk;
  }

  if (generate_cmd->parsed()) {
    std::string error;
    auto ctx = makeContext(&error);
    if (!ctx) {
      std::cerr << error << "\n";
      return kUsage;
    }
    RandomGenConfig gen_config;
    if (!pools_file.empty()) gen_config.pools = loadKeywordPools(pools_file);
    TomiDocument doc;
    const int code = produceDocument(backend, in_file, mock_file, *ctx,
                                     gen_config, seed, max_attempts, &doc);
    if (code != kOk) return code;
    if (!writeTextFile(gen_out, serializeDocument(doc))) {
      std::cerr << "cannot write " << gen_out << "\n";
      return kIoFailure;
    }
    return kOk;
  }

  auto retrieveForDoc = [&](const TomiDocument& doc, int* exit_code)
      -> std::optional<ResolvedDocument> {
    auto midi_db = openDb(common.midi_db, exit_code);
    if (!midi_db) return std::nullopt;
    auto audio_db = openDb(common.audio_db, exit_code);
    if (!audio_db) return std::nullopt;
    return retrieve(doc, *midi_db, *audio_db, common.seed);
  };

  if (retrieve_cmd->parsed()) {
    int exit_code = kOk;
    auto doc = loadDocFile(doc_file, &exit_code);
    if (!doc) return exit_code;
    auto resolved = retrieveForDoc(*doc, &exit_code);
    if (!resolved) return exit_code;
    if (!writeTextFile(out_path, resolvedToJson(*resolved))) {
      std::cerr << "cannot write " << out_path << "\n";
      return kIoFailure;
    }
    std::cerr << resolved->bindings.size() << " clip(s) bound, "
              << resolved->discarded_clips.size() << " discarded\n";
    return kOk;
  }

  if (arrange_cmd->parsed() || render_cmd->parsed()) {
    int exit_code = kOk;
    auto doc = loadDocFile(doc_file, &exit_code);
    if (!doc) return exit_code;
    auto resolved = retrieveForDoc(*doc, &exit_code);
    if (!resolved) return exit_code;
    Timeline timeline = buildTimeline(*doc);
    ArrangeResult arranged = resolveLinks(*resolved, timeline);
    for (const std::string& warning : arranged.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    if (!arranged.ok) {
      std::cerr << arranged.error << "\n";
      return kIoFailure;
    }

    if (arrange_cmd->parsed()) {
      if (!writeTextFile(out_path, arrangementToJson(arranged.arrangement))) {
        std::cerr << "cannot write " << out_path << "\n";
        return kIoFailure;
      }
      return kOk;
    }

    RenderConfig config;
    config.sample_rate = sample_rate;
    config.seed = common.seed;
    RenderOutputs outputs =
        renderSong(arranged.arrangement, *doc, config, out_path);
    if (!outputs.ok) {
      std::cerr << outputs.error << "\n";
      return kIoFailure;
    }
    std::cerr << "wrote " << outputs.wav_path << "\n";
    return kOk;
  }

  if (eval_cmd->parsed()) {
    std::string error;
    auto sequence = parseSequenceFile(eval_sequence, &error);
    if (!sequence) {
      std::cerr << error << "\n";
      return kIoFailure;
    }
    auto audio = readWavFile(wav_file);
    if (!audio) {
      std::cerr << "cannot read " << wav_file << "\n";
      return kIoFailure;
    }
    const Timeline timeline = timelineFromConstraints(*sequence);
    const MelParams params;
    const SongIlsResult ils =
        evaluateSongIls(*audio, timeline, eval_tempo, params);
    return writeIlsArtifacts(ils, params, eval_out, eval_out + ".ms.pgm",
                             eval_out + ".wf.pgm");
  }

  if (pipeline_cmd->parsed()) {
    std::string error;
    auto ctx = makeContext(&error);
    if (!ctx) {
      std::cerr << error << "\n";
      return kUsage;
    }
    RandomGenConfig gen_config;
    if (!pools_file.empty()) gen_config.pools = loadKeywordPools(pools_file);

    TomiDocument doc;
    const int code = produceDocument(backend, in_file, mock_file, *ctx,
                                     gen_config, seed, max_attempts, &doc);
    if (code != kOk) return code;

    std::error_code ec;
    fs::create_directories(out_path, ec);
    const std::string doc_path = (fs::path(out_path) / "song.tomi.json").string();
    if (!writeTextFile(doc_path, serializeDocument(doc))) {
      std::cerr << "cannot write " << doc_path << "\n";
      return kIoFailure;
    }

    ValidationReport report = validate(doc);
    if (!report.isValid()) {
      std::cerr << renderErrorReport(report);
      return kValidationFailure;
    }

    int exit_code = kOk;
    auto resolved = retrieveForDoc(doc, &exit_code);
    if (!resolved) return exit_code;
    const std::string bindings_path =
        (fs::path(out_path) / "bindings.json").string();
    if (!writeTextFile(bindings_path, resolvedToJson(*resolved))) {
      std::cerr << "cannot write " << bindings_path << "\n";
      return kIoFailure;
    }

    Timeline timeline = buildTimeline(doc);
    ArrangeResult arranged = resolveLinks(*resolved, timeline);
    for (const std::string& warning : arranged.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    if (!arranged.ok) {
      std::cerr << arranged.error << "\n";
      return kIoFailure;
    }

    RenderConfig config;
    config.sample_rate = sample_rate;
    config.seed = seed;
    RenderOutputs outputs = renderSong(arranged.arrangement, doc, config, out_path);
    if (!outputs.ok) {
      std::cerr << outputs.error << "\n";
      return kIoFailure;
    }

    auto audio = readWavFile(outputs.wav_path);
    if (!audio) {
      std::cerr << "cannot re-read " << outputs.wav_path << "\n";
      return kIoFailure;
    }
    const MelParams params;
    const SongIlsResult ils =
        evaluateSongIls(*audio, timeline, doc.tempo_bpm, params);
    return writeIlsArtifacts(
        ils, params, (fs::path(out_path) / "ils_report.txt").string(),
        (fs::path(out_path) / "ils_ms.pgm").string(),
        (fs::path(out_path) / "ils_wf.pgm").string());
  }

  std::cerr << app.help();
  return kUsage;
}

}  // namespace tomi::cli
