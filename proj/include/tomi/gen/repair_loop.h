// Validation-driven generation loop: prompt, parse + validate the
// response, and feed the rendered error report back until the document is
// clean or attempts run out.

#pragma once

#include <optional>

#include "tomi/doc/document_io.h"
#include "tomi/gen/backend.h"
#include "tomi/gen/icl_prompt.h"

namespace tomi {

struct GenerationAttempt {
  std::string prompt;    // the user message sent this turn
  std::string response;  // raw backend text
  ValidationReport report;
};

struct BackendTranscript {
  std::vector<GenerationAttempt> attempts;
  std::optional<TomiDocument> final_doc;  // validates clean when present
  bool ok = false;
  std::string error;
};

/// Extracts the JSON payload from a backend response, tolerating a fenced
/// ``` block around it.
std::string extractJsonPayload(const std::string& response);

/// max_attempts >= 1. Transport failures surface immediately with the
/// attempt index; exhaustion fails with the last report rendered.
BackendTranscript generateWithRepair(ChatBackend& backend,
                                     const GenerationContext& ctx,
                                     int max_attempts);

}  // namespace tomi
