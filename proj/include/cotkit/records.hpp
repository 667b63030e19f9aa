#pragma once

// Canonical data model shared by every pipeline stage, plus the JSONL
// record mappings. Records are plain values; conversion helpers throw
// cotkit::Error(ErrorCode::parse) on schema violations. Use
// validate_record() when every violation must be reported instead.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cotkit/error.hpp"

namespace cotkit {

using Json = nlohmann::ordered_json;

struct ProblemRecord {
  std::string id;
  std::string question;
  std::string gold_answer;
  std::map<std::string, std::string> meta;

  bool operator==(const ProblemRecord&) const = default;
};

enum class Provenance { self_distilled, teacher_guided };

std::string_view to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

struct TraceRecord {
  std::string id;
  std::string problem_id;
  std::string text;
  Provenance provenance = Provenance::self_distilled;
  // Generation settings (seed, temperature, ...) are carried opaquely.
  Json sampling_meta = Json::object();

  bool operator==(const TraceRecord&) const = default;
};

struct SourceNode {
  int index = 0;  // 1-based
  std::string label;
  std::string text;

  bool operator==(const SourceNode&) const = default;
};

struct SourceNodeSequence {
  std::string trace_id;
  // Not part of the minimal node schema; carried so later stages can join
  // against problems.jsonl without re-reading traces.
  std::string problem_id;
  std::vector<SourceNode> nodes;

  std::size_t length() const { return nodes.size(); }
  bool operator==(const SourceNodeSequence&) const = default;
};

/// "N" followed by the decimal index.
std::string node_label(int index);
/// Parses "N12" (surrounding whitespace tolerated) into 12.
std::optional<int> parse_node_label(std::string_view label);

enum class NodeType { Backtracking, Verification, Exploration, Clarification, Conclusion };

inline constexpr std::array<NodeType, 5> kAllNodeTypes{
    NodeType::Backtracking, NodeType::Verification, NodeType::Exploration,
    NodeType::Clarification, NodeType::Conclusion};

std::string_view to_string(NodeType t);
/// Case-insensitive; tolerates surrounding whitespace.
std::optional<NodeType> node_type_from_string(std::string_view s);

struct TaxonomyLabel {
  std::string node_label;
  NodeType primary = NodeType::Clarification;
  std::optional<NodeType> secondary;

  bool operator==(const TaxonomyLabel&) const = default;
};

enum class ConclusionKind { IntermediateConclusion, AnsweringConclusion };

std::string_view to_string(ConclusionKind k);
/// Accepts "Intermediate Conclusion", "intermediate", "AnsweringConclusion", ...
std::optional<ConclusionKind> conclusion_kind_from_string(std::string_view s);

struct ConclusionJudgment {
  std::string node_label;
  bool is_correct = false;
  ConclusionKind kind = ConclusionKind::IntermediateConclusion;

  bool operator==(const ConclusionJudgment&) const = default;
};

struct LabelSet {
  std::string trace_id;
  std::vector<TaxonomyLabel> labels;
  // Unparsed annotator output kept for audit.
  std::optional<std::string> response;

  bool operator==(const LabelSet&) const = default;
};

struct JudgmentSet {
  std::string trace_id;
  std::vector<ConclusionJudgment> judgments;
  std::optional<std::string> response;

  bool operator==(const JudgmentSet&) const = default;
};

// JSON mappings (field names follow the JSONL file schemas).
Json to_json(const ProblemRecord& r);
Json to_json(const TraceRecord& r);
Json to_json(const SourceNodeSequence& s);
Json to_json(const TaxonomyLabel& l);
Json to_json(const ConclusionJudgment& j);
Json to_json(const LabelSet& s);
Json to_json(const JudgmentSet& s);

ProblemRecord problem_from_json(const Json& j);
TraceRecord trace_from_json(const Json& j);
SourceNodeSequence nodes_from_json(const Json& j);
TaxonomyLabel taxonomy_label_from_json(const Json& j);
ConclusionJudgment judgment_from_json(const Json& j);
LabelSet label_set_from_json(const Json& j);
JudgmentSet judgment_set_from_json(const Json& j);

/// Interprets 0/1, true/false, "0"/"1", "true"/"false".
std::optional<bool> parse_flag(const Json& v);

}  // namespace cotkit
