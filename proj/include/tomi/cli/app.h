// Single entry point exposing the pipeline as subcommands. Exit codes:
// 0 success, 1 validation failure, 2 I/O or transport failure, 64 usage.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomi/gen/icl_prompt.h"

namespace tomi::cli {

/// Parses a section-sequence file: one "name label bars" line per section,
/// '#' comments and blank lines ignored.
std::optional<std::vector<SectionConstraint>> parseSequenceFile(
    const std::string& path, std::string* error);

int run(const std::vector<std::string>& args);

}  // namespace tomi::cli
