#include "tomi/gen/repair_loop.h"

#include <stdexcept>

namespace tomi {

std::string extractJsonPayload(const std::string& response) {
  const size_t fence = response.find("```");
  if (fence == std::string::npos) return response;
  size_t body = response.find('\n', fence);
  if (body == std::string::npos) return response;
  ++body;
  const size_t closing = response.find("```", body);
  if (closing == std::string::npos) return response;
  return response.substr(body, closing - body);
}

BackendTranscript generateWithRepair(ChatBackend& backend,
                                     const GenerationContext& ctx,
                                     int max_attempts) {
  if (max_attempts < 1) {
    throw std::invalid_argument("max_attempts must be at least 1");
  }
  BackendTranscript transcript;

  std::vector<ChatMessage> messages;
  std::string next_prompt = buildIclPrompt(ctx);

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    messages.push_back({"user", next_prompt});
    ChatResult reply = backend.send(messages);
    if (!reply.ok) {
      transcript.error =
          "attempt " + std::to_string(attempt) + ": " + reply.error;
      return transcript;
    }
    messages.push_back({"assistant", reply.text});

    LoadResult loaded = loadDocument(extractJsonPayload(reply.text));
    transcript.attempts.push_back({next_prompt, reply.text, loaded.report});

    if (loaded.doc && loaded.report.isValid()) {
      transcript.final_doc = std::move(loaded.doc);
      transcript.ok = true;
      return transcript;
    }

    next_prompt =
        "Your response failed rule validation. Fix every reported problem "
        "and respond again with ONLY the corrected JSON document.\n\n" +
        renderErrorReport(loaded.report);
  }

  transcript.error = "validation did not converge after " +
                     std::to_string(max_attempts) + " attempts";
  return transcript;
}

}  // namespace tomi
