// Prompt construction, the validation repair loop against scripted and
// HTTP backends, and the stochastic rule-based generator.

#include "tomi/gen/repair_loop.h"

#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "testing/fixtures.h"
#include "tomi/gen/random_gen.h"
#include "tomi/util/file_io.h"

namespace tomi {
namespace {

GenerationContext smallContext() {
  GenerationContext ctx;
  ctx.tempo_bpm = 120.0;
  ctx.key = {0, KeyMode::Minor};
  ctx.relax_sequence_limits = true;
  ctx.section_sequence = std::vector<SectionConstraint>{
      {"v1", PhraseLabel::Verse, 4},
      {"c1", PhraseLabel::Chorus, 4},
      {"v2", PhraseLabel::Verse, 4},
  };
  return ctx;
}

GenerationContext experimentContext() {
  GenerationContext ctx;
  ctx.tempo_bpm = 120.0;
  ctx.key = {0, KeyMode::Minor};
  ctx.section_sequence = std::vector<SectionConstraint>{
      {"i", PhraseLabel::Intro, 8},    {"v1", PhraseLabel::Verse, 16},
      {"p1", PhraseLabel::PreChorus, 8}, {"c1", PhraseLabel::Chorus, 16},
      {"v2", PhraseLabel::Verse, 16},  {"p2", PhraseLabel::PreChorus, 8},
      {"c2", PhraseLabel::Chorus, 16}, {"o", PhraseLabel::Outro, 8},
  };
  return ctx;
}

TEST(IclPrompt, EmbedsSequenceVerbatim) {
  const GenerationContext ctx = experimentContext();
  const std::string prompt = buildIclPrompt(ctx);
  EXPECT_NE(prompt.find("v1 verse 16"), std::string::npos);
  EXPECT_NE(prompt.find("p1 pre_chorus 8"), std::string::npos);
}

TEST(IclPrompt, MoodOnlyWhenPresent) {
  GenerationContext ctx = experimentContext();
  const std::string without = buildIclPrompt(ctx);
  EXPECT_EQ(without.find("mood"), std::string::npos);
  ctx.mood = "dark hypnotic techno";
  const std::string with = buildIclPrompt(ctx);
  EXPECT_NE(with.find("dark hypnotic techno"), std::string::npos);
}

TEST(IclPrompt, DeterministicAndOrdered) {
  const GenerationContext ctx = experimentContext();
  const std::string a = buildIclPrompt(ctx);
  EXPECT_EQ(a, buildIclPrompt(ctx));
  // Schema walkthrough precedes the ordering instruction, which precedes
  // the response shape, which precedes the constraints.
  const size_t schema = a.find("four node types");
  const size_t order = a.find("first sections, then tracks, then clips");
  const size_t unique = a.find("unique name");
  const size_t shape = a.find("\"version\": 1");
  const size_t constraints = a.find("Constraints for this composition");
  ASSERT_NE(schema, std::string::npos);
  ASSERT_NE(order, std::string::npos);
  ASSERT_NE(unique, std::string::npos);
  ASSERT_NE(shape, std::string::npos);
  ASSERT_NE(constraints, std::string::npos);
  EXPECT_LT(schema, order);
  EXPECT_LT(order, shape);
  EXPECT_LT(shape, constraints);
}

TEST(IclPrompt, TemplateFileStaysInSync) {
  auto file = readTextFile(std::string(TOMI_SOURCE_DIR) + "/prompts/icl_prompt.txt");
  ASSERT_TRUE(file.has_value()) << "prompts/icl_prompt.txt missing";
  EXPECT_EQ(*file, iclPromptTemplate());
}

TEST(ContextChecks, SequenceRegime) {
  GenerationContext ctx = experimentContext();
  EXPECT_EQ(contextProblem(ctx), "");
  ctx.section_sequence->resize(3);
  EXPECT_NE(contextProblem(ctx), "");
  ctx.relax_sequence_limits = true;
  EXPECT_EQ(contextProblem(ctx), "");
}

TEST(RepairLoop, ValidFirstTry) {
  const std::string valid = serializeDocument(testing::minimalDoc());
  ScriptedBackend backend({valid});
  BackendTranscript transcript = generateWithRepair(backend, smallContext(), 5);
  ASSERT_TRUE(transcript.ok) << transcript.error;
  EXPECT_EQ(transcript.attempts.size(), 1u);
  EXPECT_TRUE(transcript.final_doc.has_value());
}

TEST(RepairLoop, SecondPromptCarriesErrorCodes) {
  TomiDocument broken = testing::minimalDoc();
  broken.links[0].clip_ref = "ghost";
  const std::string invalid = serializeDocument(broken);
  const std::string valid = serializeDocument(testing::minimalDoc());

  ScriptedBackend backend({invalid, valid});
  BackendTranscript transcript = generateWithRepair(backend, smallContext(), 5);
  ASSERT_TRUE(transcript.ok) << transcript.error;
  ASSERT_EQ(transcript.attempts.size(), 2u);
  EXPECT_NE(transcript.attempts[1].prompt.find("E_UNKNOWN_REF"),
            std::string::npos);
  EXPECT_NE(transcript.attempts[1].prompt.find("ghost"), std::string::npos);
}

TEST(RepairLoop, ExhaustionFailsCleanly) {
  const std::string garbage = "not json at all";
  ScriptedBackend backend({garbage, garbage, garbage});
  BackendTranscript transcript = generateWithRepair(backend, smallContext(), 3);
  EXPECT_FALSE(transcript.ok);
  EXPECT_EQ(transcript.attempts.size(), 3u);
  EXPECT_FALSE(transcript.final_doc.has_value());
  EXPECT_NE(transcript.error.find("3"), std::string::npos);
}

TEST(RepairLoop, TransportFailureSurfacesAttemptIndex) {
  ScriptedBackend backend({});  // exhausted immediately
  BackendTranscript transcript = generateWithRepair(backend, smallContext(), 4);
  EXPECT_FALSE(transcript.ok);
  EXPECT_NE(transcript.error.find("attempt 1"), std::string::npos);
}

TEST(RepairLoop, FencedJsonIsExtracted) {
  const std::string valid = serializeDocument(testing::minimalDoc());
  ScriptedBackend backend({"Here is the song:\n```json\n" + valid + "```\n"});
  BackendTranscript transcript = generateWithRepair(backend, smallContext(), 2);
  EXPECT_TRUE(transcript.ok) << transcript.error;
}

TEST(ScriptedBackendFile, SplitsOnSeparators) {
  testing::ScratchDir dir;
  writeTextFile(dir.file("mock.txt"), "first response\n---\nsecond response\n");
  auto backend = ScriptedBackend::fromFile(dir.file("mock.txt"));
  ASSERT_NE(backend, nullptr);
  EXPECT_EQ(backend->send({}).text, "first response\n");
  EXPECT_EQ(backend->send({}).text, "second response\n");
  EXPECT_FALSE(backend->send({}).ok);
}

TEST(HttpBackendTest, SpeaksChatCompletionWireFormat) {
  const std::string reply = serializeDocument(testing::minimalDoc());
  httplib::Server server;
  std::string seen_body;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                seen_body = req.body;
                nlohmann::json out;
                out["choices"] = {{{"message", {{"content", reply}}}}};
                res.set_content(out.dump(), "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread server_thread([&]() { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpBackend backend(
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions",
      "test-model", "test-key");
  ChatResult result = backend.send({{"user", "hello"}});
  server.stop();
  server_thread.join();

  ASSERT_TRUE(result.ok) << result.error;
  EXPECT_EQ(result.text, reply);
  nlohmann::json body = nlohmann::json::parse(seen_body);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"][0]["role"], "user");
}

TEST(HttpBackendTest, ConnectionRefusedIsTransportError) {
  HttpBackend backend("http://127.0.0.1:1/v1/chat/completions", "m", "");
  ChatResult result = backend.send({{"user", "x"}});
  EXPECT_FALSE(result.ok);
}

TEST(RandomGenerate, TrackCountWithinBounds) {
  const GenerationContext ctx = experimentContext();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const TomiDocument doc = randomGenerate(ctx, {}, seed);
    EXPECT_GE(doc.tracks.size(), 15u) << "seed " << seed;
    EXPECT_LE(doc.tracks.size(), 25u) << "seed " << seed;
  }
}

TEST(RandomGenerate, AlwaysValidatesClean) {
  const GenerationContext ctx = experimentContext();
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const TomiDocument doc = randomGenerate(ctx, {}, seed);
    const ValidationReport report = validate(doc);
    EXPECT_EQ(report.blockingCount(), 0)
        << "seed " << seed << "\n"
        << renderErrorReport(report);
  }
}

TEST(RandomGenerate, BassProgressionsDeriveFromChords) {
  const GenerationContext ctx = experimentContext();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const TomiDocument doc = randomGenerate(ctx, {}, seed);
    std::vector<std::vector<int>> chord_progressions;
    for (const auto& [name, clip] : doc.clips) {
      if (const auto* midi = std::get_if<MidiClipSpec>(&clip)) {
        if (midi->content_type == MidiContentType::Chord &&
            midi->root_progression) {
          chord_progressions.push_back(*midi->root_progression);
        }
      }
    }
    for (const auto& [name, clip] : doc.clips) {
      if (const auto* midi = std::get_if<MidiClipSpec>(&clip)) {
        if (midi->content_type != MidiContentType::Bass) continue;
        ASSERT_TRUE(midi->root_progression.has_value()) << name;
        EXPECT_NE(std::find(chord_progressions.begin(), chord_progressions.end(),
                            *midi->root_progression),
                  chord_progressions.end())
            << "seed " << seed << " clip " << name;
      }
    }
  }
}

TEST(RandomGenerate, SameSeedSameDocument) {
  const GenerationContext ctx = experimentContext();
  EXPECT_EQ(randomGenerate(ctx, {}, 1234), randomGenerate(ctx, {}, 1234));
  EXPECT_NE(randomGenerate(ctx, {}, 1), randomGenerate(ctx, {}, 2));
}

TEST(RandomGenerate, AllFourTransformsAppearAcrossSeeds) {
  const GenerationContext ctx = experimentContext();
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 200 && seen.size() < 4; ++seed) {
    const TomiDocument doc = randomGenerate(ctx, {}, seed);
    for (const CompositionLink& link : doc.links) {
      seen.insert(link.transform_ref);
    }
  }
  EXPECT_TRUE(seen.contains("tf_general"));
  EXPECT_TRUE(seen.contains("tf_drum"));
  EXPECT_TRUE(seen.contains("tf_riser"));
  EXPECT_TRUE(seen.contains("tf_faller"));
}

TEST(RandomGenerate, RequiresSequence) {
  GenerationContext ctx;
  EXPECT_THROW(randomGenerate(ctx, {}, 0), std::invalid_argument);
}

TEST(KeywordPoolsConfig, LoadsAndFallsBack) {
  testing::ScratchDir dir;
  writeTextFile(dir.file("pools.json"),
                R"({"tonal": ["lead"], "percussion": ["tom"], "sfx": ["riser"]})");
  const KeywordPools pools = loadKeywordPools(dir.file("pools.json"));
  EXPECT_EQ(pools.tonal, std::vector<std::string>{"lead"});
  const KeywordPools fallback = loadKeywordPools(dir.file("missing.json"));
  EXPECT_EQ(fallback.tonal, KeywordPools::defaults().tonal);
}

}  // namespace
}  // namespace tomi
