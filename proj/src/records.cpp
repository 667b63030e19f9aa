#include "cotkit/records.hpp"

#include <charconv>

#include <fmt/format.h>

#include "cotkit/text_util.hpp"

namespace cotkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "USAGE";
    case ErrorCode::config: return "CONFIG";
    case ErrorCode::io: return "IO";
    case ErrorCode::parse: return "PARSE";
    case ErrorCode::incomplete: return "INCOMPLETE";
    case ErrorCode::bad_class: return "BAD_CLASS";
    case ErrorCode::duplicate: return "DUPLICATE";
    case ErrorCode::bad_kind: return "BAD_KIND";
    case ErrorCode::no_conclusions: return "NO_CONCLUSIONS";
    case ErrorCode::not_found: return "NOT_FOUND";
    case ErrorCode::range: return "RANGE";
    case ErrorCode::incomplete_judgments: return "INCOMPLETE_JUDGMENTS";
    case ErrorCode::join: return "JOIN";
    case ErrorCode::sequential: return "SEQUENTIAL";
    case ErrorCode::invalid_tree: return "INVALID_TREE";
    case ErrorCode::service: return "SERVICE";
  }
  return "UNKNOWN";
}

std::string_view to_string(Provenance p) {
  return p == Provenance::self_distilled ? "self_distilled" : "teacher_guided";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  if (s == "self_distilled") return Provenance::self_distilled;
  if (s == "teacher_guided") return Provenance::teacher_guided;
  return std::nullopt;
}

std::string node_label(int index) { return "N" + std::to_string(index); }

std::optional<int> parse_node_label(std::string_view label) {
  label = text::trim(label);
  if (label.size() < 2 || (label[0] != 'N' && label[0] != 'n')) return std::nullopt;
  std::string_view digits = label.substr(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || value < 1) return std::nullopt;
  return value;
}

std::string_view to_string(NodeType t) {
  switch (t) {
    case NodeType::Backtracking: return "Backtracking";
    case NodeType::Verification: return "Verification";
    case NodeType::Exploration: return "Exploration";
    case NodeType::Clarification: return "Clarification";
    case NodeType::Conclusion: return "Conclusion";
  }
  return "";
}

std::optional<NodeType> node_type_from_string(std::string_view s) {
  s = text::trim(s);
  for (NodeType t : kAllNodeTypes) {
    if (text::iequals(s, to_string(t))) return t;
  }
  return std::nullopt;
}

std::string_view to_string(ConclusionKind k) {
  return k == ConclusionKind::AnsweringConclusion ? "Answering Conclusion"
                                                  : "Intermediate Conclusion";
}

std::optional<ConclusionKind> conclusion_kind_from_string(std::string_view s) {
  std::string squashed;
  for (char c : text::trim(s)) {
    if (c != ' ' && c != '_' && c != '-') squashed.push_back(text::ascii_lower(c));
  }
  if (squashed == "intermediateconclusion" || squashed == "intermediate") {
    return ConclusionKind::IntermediateConclusion;
  }
  if (squashed == "answeringconclusion" || squashed == "answering") {
    return ConclusionKind::AnsweringConclusion;
  }
  return std::nullopt;
}

std::optional<bool> parse_flag(const Json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer() || v.is_number_unsigned()) {
    auto n = v.get<long long>();
    if (n == 0 || n == 1) return n == 1;
    return std::nullopt;
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == 0.0 || d == 1.0) return d == 1.0;
    return std::nullopt;
  }
  if (v.is_string()) {
    std::string s = text::to_lower(text::trim(v.get<std::string>()));
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::parse, what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) schema_error("record is not a JSON object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(fmt::format("missing field '{}'", key));
  return *it;
}

std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) schema_error(fmt::format("field '{}' must be a string", key));
  return v.get<std::string>();
}

const Json& require_array(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_array()) schema_error(fmt::format("field '{}' must be an array", key));
  return v;
}

std::optional<std::string> optional_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) schema_error(fmt::format("field '{}' must be a string", key));
  return it->get<std::string>();
}

}  // namespace

Json to_json(const ProblemRecord& r) {
  Json meta = Json::object();
  for (const auto& [k, v] : r.meta) meta[k] = v;
  return Json{{"id", r.id}, {"question", r.question}, {"gold_answer", r.gold_answer}, {"meta", meta}};
}

Json to_json(const TraceRecord& r) {
  return Json{{"id", r.id},
              {"problem_id", r.problem_id},
              {"text", r.text},
              {"provenance", to_string(r.provenance)},
              {"sampling_meta", r.sampling_meta}};
}

Json to_json(const SourceNodeSequence& s) {
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back(Json{{"index", n.index}, {"label", n.label}, {"text", n.text}});
  }
  Json out{{"trace_id", s.trace_id}};
  if (!s.problem_id.empty()) out["problem_id"] = s.problem_id;
  out["nodes"] = std::move(nodes);
  return out;
}

Json to_json(const TaxonomyLabel& l) {
  return Json{{"id", l.node_label},
              {"taxonomy_primary_type", to_string(l.primary)},
              {"taxonomy_secondary_type",
               l.secondary ? Json(to_string(*l.secondary)) : Json(nullptr)}};
}

Json to_json(const ConclusionJudgment& j) {
  return Json{{"conclusion_node", j.node_label},
              {"is_correct", j.is_correct ? 1 : 0},
              {"type", to_string(j.kind)}};
}

Json to_json(const LabelSet& s) {
  Json labels = Json::array();
  for (const auto& l : s.labels) labels.push_back(to_json(l));
  Json out{{"trace_id", s.trace_id}, {"labels", labels}};
  if (s.response) out["response"] = *s.response;
  return out;
}

Json to_json(const JudgmentSet& s) {
  Json judgments = Json::array();
  for (const auto& j : s.judgments) judgments.push_back(to_json(j));
  Json out{{"trace_id", s.trace_id}, {"judgments", judgments}};
  if (s.response) out["response"] = *s.response;
  return out;
}

ProblemRecord problem_from_json(const Json& j) {
  ProblemRecord r;
  r.id = require_string(j, "id");
  r.question = require_string(j, "question");
  r.gold_answer = require_string(j, "gold_answer");
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) schema_error("field 'meta' must be an object");
    for (const auto& [k, v] : it->items()) {
      r.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return r;
}

TraceRecord trace_from_json(const Json& j) {
  TraceRecord r;
  r.id = require_string(j, "id");
  r.problem_id = require_string(j, "problem_id");
  r.text = require_string(j, "text");
  if (auto p = optional_string(j, "provenance")) {
    auto parsed = provenance_from_string(*p);
    if (!parsed) schema_error(fmt::format("unknown provenance '{}'", *p));
    r.provenance = *parsed;
  }
  if (auto it = j.find("sampling_meta"); it != j.end() && !it->is_null()) {
    r.sampling_meta = *it;
  }
  return r;
}

SourceNodeSequence nodes_from_json(const Json& j) {
  SourceNodeSequence s;
  s.trace_id = require_string(j, "trace_id");
  s.problem_id = optional_string(j, "problem_id").value_or("");
  for (const auto& n : require_array(j, "nodes")) {
    SourceNode node;
    const Json& idx = require(n, "index");
    if (!idx.is_number_integer()) schema_error("node 'index' must be an integer");
    node.index = idx.get<int>();
    node.label = optional_string(n, "label").value_or(node_label(node.index));
    node.text = require_string(n, "text");
    s.nodes.push_back(std::move(node));
  }
  return s;
}

TaxonomyLabel taxonomy_label_from_json(const Json& j) {
  TaxonomyLabel l;
  l.node_label = require_string(j, "id");
  std::string primary = require_string(j, "taxonomy_primary_type");
  auto p = node_type_from_string(primary);
  if (!p) throw Error(ErrorCode::bad_class, fmt::format("unknown taxonomy class '{}'", primary));
  l.primary = *p;
  if (auto it = j.find("taxonomy_secondary_type"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) schema_error("field 'taxonomy_secondary_type' must be a string or null");
    std::string sec = it->get<std::string>();
    std::string_view t = text::trim(sec);
    if (!t.empty() && !text::iequals(t, "none") && !text::iequals(t, "null")) {
      auto s = node_type_from_string(t);
      if (!s) throw Error(ErrorCode::bad_class, fmt::format("unknown taxonomy class '{}'", sec));
      if (*s != l.primary) l.secondary = *s;
    }
  }
  return l;
}

ConclusionJudgment judgment_from_json(const Json& j) {
  ConclusionJudgment out;
  out.node_label = require_string(j, "conclusion_node");
  auto flag = parse_flag(require(j, "is_correct"));
  if (!flag) schema_error("field 'is_correct' must be 0/1 or a boolean");
  out.is_correct = *flag;
  std::string type = require_string(j, "type");
  auto kind = conclusion_kind_from_string(type);
  if (!kind) throw Error(ErrorCode::bad_kind, fmt::format("unknown conclusion type '{}'", type));
  out.kind = *kind;
  return out;
}

LabelSet label_set_from_json(const Json& j) {
  LabelSet s;
  s.trace_id = require_string(j, "trace_id");
  for (const auto& l : require_array(j, "labels")) s.labels.push_back(taxonomy_label_from_json(l));
  s.response = optional_string(j, "response");
  return s;
}

JudgmentSet judgment_set_from_json(const Json& j) {
  JudgmentSet s;
  s.trace_id = require_string(j, "trace_id");
  for (const auto& x : require_array(j, "judgments")) s.judgments.push_back(judgment_from_json(x));
  s.response = optional_string(j, "response");
  return s;
}

}  // namespace cotkit
