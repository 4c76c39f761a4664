// Parsing, canonical serialization, and rule validation for TOMI documents
// in the structured text schema (see docs/schema.md), plus the error-report
// rendering used by the generation repair loop.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomi/core/types.h"

namespace tomi {

enum class IssueCode {
  Syntax,
  DupName,
  UnknownRef,
  TypeMismatch,
  BadDuration,
  BadLabel,
  BadActionSeq,
  FxMismatch,
  BadKey,
  BadTempo,
  EmptySequence,
  OrphanNode,  // warning; everything else blocks acceptance
};

const char* toString(IssueCode code);
bool isWarning(IssueCode code);

struct ValidationIssue {
  IssueCode code = IssueCode::Syntax;
  std::string path;     // document location; line/column text for Syntax
  std::string message;  // human/LLM-readable
  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  int blockingCount() const;
  bool isValid() const { return blockingCount() == 0; }
};

struct ParseResult {
  std::optional<TomiDocument> doc;
  std::vector<ValidationIssue> issues;

  /// True when the text mapped onto a document with no issues at all.
  bool clean() const { return doc.has_value() && issues.empty(); }
};

/// Maps schema text onto a document. Structural problems (malformed JSON,
/// missing/unknown/mistyped fields, unmappable enum values) leave doc empty;
/// duplicate names are reported but construction continues with the first
/// occurrence winning, so later validation still has a document to walk.
ParseResult parseDocument(std::string_view text);

/// Canonical, deterministic serialization: fixed field order, nodes sorted
/// by name, two-space indent. parseDocument(serializeDocument(d)) == d for
/// any valid document.
std::string serializeDocument(const TomiDocument& doc);

/// Rule validation over a constructed document: every node/link invariant,
/// sequence non-emptiness, referential closure, and orphan-node warnings.
ValidationReport validate(const TomiDocument& doc);

struct LoadResult {
  std::optional<TomiDocument> doc;
  ValidationReport report;
};

/// parseDocument + validate with merged, deduplicated issues.
LoadResult loadDocument(std::string_view text);

/// One line per issue (code, path, message), stably sorted by path then
/// code. Warnings-only reports are prefixed with a "no blocking errors"
/// marker line. Throws std::invalid_argument on an empty report.
std::string renderErrorReport(const ValidationReport& report);

}  // namespace tomi
