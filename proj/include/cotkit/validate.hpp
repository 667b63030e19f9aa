#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cotkit/records.hpp"

namespace cotkit {

enum class Severity { error, warning };

struct Diagnostic {
  std::string code;  // e.g. "EMPTY_TEXT", "INDEX_GAP"
  std::string message;
  std::string location;
  Severity severity = Severity::error;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::string record_id;
  std::vector<Diagnostic> diagnostics;

  // ok iff no error-severity diagnostic is present.
  bool ok() const;
  bool has(std::string_view code) const;
  void error(std::string code, std::string message, std::string location = {});
  void warning(std::string code, std::string message, std::string location = {});
};

Json to_json(const ValidationReport& r);

enum class SchemaKind { problem, trace, nodes, labels, judgments, tree };

/// Throws Error(usage) for unknown names.
SchemaKind schema_kind_from_string(std::string_view name);
std::string_view to_string(SchemaKind kind);

/// Validates one JSONL line. Malformed JSON yields a PARSE diagnostic whose
/// location carries the byte offset.
ValidationReport validate_record(std::string_view line, SchemaKind kind);
ValidationReport validate_value(const Json& record, SchemaKind kind);

struct LineReport {
  std::size_t line = 0;  // 1-based
  ValidationReport report;
};

/// Validates a whole JSONL file, including id uniqueness across lines.
/// Only lines with findings are returned.
std::vector<LineReport> validate_file(const std::string& path, SchemaKind kind);

}  // namespace cotkit
