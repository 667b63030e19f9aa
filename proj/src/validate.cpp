#include "cotkit/validate.hpp"

#include <fstream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "cotkit/text_util.hpp"
#include "cotkit/tree.hpp"

namespace cotkit {

bool ValidationReport::ok() const {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::error) return false;
  }
  return true;
}

bool ValidationReport::has(std::string_view code) const {
  for (const auto& d : diagnostics) {
    if (d.code == code) return true;
  }
  return false;
}

void ValidationReport::error(std::string code, std::string message, std::string location) {
  diagnostics.push_back({std::move(code), std::move(message), std::move(location), Severity::error});
}

void ValidationReport::warning(std::string code, std::string message, std::string location) {
  diagnostics.push_back({std::move(code), std::move(message), std::move(location), Severity::warning});
}

Json to_json(const ValidationReport& r) {
  Json diags = Json::array();
  for (const auto& d : r.diagnostics) {
    diags.push_back(Json{{"code", d.code},
                         {"severity", d.severity == Severity::error ? "error" : "warning"},
                         {"message", d.message},
                         {"location", d.location}});
  }
  return Json{{"record_id", r.record_id}, {"ok", r.ok()}, {"diagnostics", diags}};
}

SchemaKind schema_kind_from_string(std::string_view name) {
  std::string n = text::to_lower(text::trim(name));
  if (n == "problem" || n == "problems") return SchemaKind::problem;
  if (n == "trace" || n == "traces") return SchemaKind::trace;
  if (n == "nodes" || n == "node") return SchemaKind::nodes;
  if (n == "labels" || n == "label") return SchemaKind::labels;
  if (n == "judgments" || n == "judgment") return SchemaKind::judgments;
  if (n == "tree" || n == "trees") return SchemaKind::tree;
  throw Error(ErrorCode::usage, fmt::format("unknown schema kind '{}'", name));
}

std::string_view to_string(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::problem: return "problems";
    case SchemaKind::trace: return "traces";
    case SchemaKind::nodes: return "nodes";
    case SchemaKind::labels: return "labels";
    case SchemaKind::judgments: return "judgments";
    case SchemaKind::tree: return "trees";
  }
  return "";
}

namespace {

// Checks `key` is present with the expected JSON type; returns the value
// or nullptr after recording the finding.
const Json* field(const Json& obj, const char* key, Json::value_t type, ValidationReport& rep,
                  const std::string& where = {}) {
  std::string loc = where.empty() ? std::string(key) : where + "." + key;
  auto it = obj.find(key);
  if (it == obj.end()) {
    rep.error("MISSING_FIELD", fmt::format("missing field '{}'", key), loc);
    return nullptr;
  }
  bool type_ok = it->type() == type ||
                 (type == Json::value_t::number_integer && it->is_number_unsigned());
  if (!type_ok) {
    rep.error("BAD_TYPE", fmt::format("field '{}' has type {}", key, it->type_name()), loc);
    return nullptr;
  }
  return &*it;
}

const Json* text_field(const Json& obj, const char* key, ValidationReport& rep,
                       const std::string& where = {}) {
  return field(obj, key, Json::value_t::string, rep, where);
}

void check_non_empty(const Json* v, const char* code, const char* what, ValidationReport& rep,
                     const std::string& loc) {
  if (v && text::trim(v->get_ref<const std::string&>()).empty()) {
    rep.error(code, fmt::format("{} is empty", what), loc);
  }
}

void validate_problem(const Json& j, ValidationReport& rep) {
  const Json* id = text_field(j, "id", rep);
  check_non_empty(id, "EMPTY_ID", "id", rep, "id");
  text_field(j, "question", rep);
  check_non_empty(text_field(j, "gold_answer", rep), "EMPTY_GOLD", "gold_answer", rep,
                  "gold_answer");
  if (auto it = j.find("meta"); it != j.end() && !it->is_object() && !it->is_null()) {
    rep.error("BAD_TYPE", "field 'meta' must be an object", "meta");
  }
}

void validate_trace(const Json& j, ValidationReport& rep) {
  check_non_empty(text_field(j, "id", rep), "EMPTY_ID", "id", rep, "id");
  check_non_empty(text_field(j, "problem_id", rep), "EMPTY_ID", "problem_id", rep, "problem_id");
  const Json* t = text_field(j, "text", rep);
  if (t && t->get_ref<const std::string&>().empty()) rep.error("EMPTY_TEXT", "text is empty", "text");
  if (auto it = j.find("provenance"); it != j.end()) {
    if (!it->is_string() || !provenance_from_string(it->get<std::string>())) {
      rep.error("BAD_ENUM", fmt::format("provenance must be self_distilled or teacher_guided, got {}",
                                        it->dump()),
                "provenance");
    }
  }
}

void validate_nodes(const Json& j, ValidationReport& rep) {
  check_non_empty(text_field(j, "trace_id", rep), "EMPTY_ID", "trace_id", rep, "trace_id");
  const Json* nodes = field(j, "nodes", Json::value_t::array, rep);
  if (!nodes) return;
  if (nodes->empty()) rep.error("EMPTY_SEQUENCE", "node list is empty", "nodes");
  int expected = 1;
  for (std::size_t pos = 0; pos < nodes->size(); ++pos) {
    const Json& n = (*nodes)[pos];
    std::string where = fmt::format("nodes[{}]", pos);
    if (!n.is_object()) {
      rep.error("BAD_TYPE", "node entry is not an object", where);
      continue;
    }
    const Json* idx = field(n, "index", Json::value_t::number_integer, rep, where);
    const Json* text_v = text_field(n, "text", rep, where);
    if (text_v && text_v->get_ref<const std::string&>().empty()) {
      rep.error("EMPTY_TEXT", "node text is empty", where + ".text");
    }
    if (!idx) continue;
    int index = idx->get<int>();
    if (index != expected) {
      rep.error("INDEX_GAP",
                fmt::format("expected index {} at position {}, found {}", expected, pos + 1, index),
                fmt::format("position {}", pos + 1));
    }
    expected = index + 1;
    if (auto it = n.find("label"); it != n.end()) {
      if (!it->is_string() || it->get<std::string>() != node_label(index)) {
        rep.error("BAD_LABEL", fmt::format("label must be '{}'", node_label(index)), where + ".label");
      }
    }
  }
}

void validate_labels(const Json& j, ValidationReport& rep) {
  check_non_empty(text_field(j, "trace_id", rep), "EMPTY_ID", "trace_id", rep, "trace_id");
  const Json* labels = field(j, "labels", Json::value_t::array, rep);
  if (!labels) return;
  std::set<int> seen;
  for (std::size_t pos = 0; pos < labels->size(); ++pos) {
    const Json& l = (*labels)[pos];
    std::string where = fmt::format("labels[{}]", pos);
    if (!l.is_object()) {
      rep.error("BAD_TYPE", "label entry is not an object", where);
      continue;
    }
    if (const Json* id = text_field(l, "id", rep, where)) {
      auto idx = parse_node_label(id->get<std::string>());
      if (!idx) {
        rep.error("BAD_LABEL", fmt::format("bad node id {}", id->dump()), where + ".id");
      } else if (!seen.insert(*idx).second) {
        rep.error("DUPLICATE", fmt::format("duplicate node id {}", id->dump()), where + ".id");
      }
    }
    std::optional<NodeType> primary;
    if (const Json* p = text_field(l, "taxonomy_primary_type", rep, where)) {
      primary = node_type_from_string(p->get<std::string>());
      if (!primary) rep.error("BAD_CLASS", fmt::format("unknown class {}", p->dump()), where);
    }
    if (auto it = l.find("taxonomy_secondary_type"); it != l.end() && !it->is_null()) {
      std::string s = it->is_string() ? it->get<std::string>() : it->dump();
      auto t = text::trim(s);
      if (!t.empty() && !text::iequals(t, "none")) {
        auto sec = node_type_from_string(t);
        if (!sec) {
          rep.error("BAD_CLASS", fmt::format("unknown secondary class {}", it->dump()), where);
        } else if (primary && *sec == *primary) {
          rep.warning("SECONDARY_EQUALS_PRIMARY", "secondary equals primary; treated as absent",
                      where);
        }
      }
    }
  }
}

void validate_judgments(const Json& j, ValidationReport& rep) {
  check_non_empty(text_field(j, "trace_id", rep), "EMPTY_ID", "trace_id", rep, "trace_id");
  const Json* list = field(j, "judgments", Json::value_t::array, rep);
  if (!list) return;
  for (std::size_t pos = 0; pos < list->size(); ++pos) {
    const Json& x = (*list)[pos];
    std::string where = fmt::format("judgments[{}]", pos);
    if (!x.is_object()) {
      rep.error("BAD_TYPE", "judgment entry is not an object", where);
      continue;
    }
    if (const Json* id = text_field(x, "conclusion_node", rep, where)) {
      if (!parse_node_label(id->get<std::string>())) {
        rep.error("BAD_LABEL", fmt::format("bad node id {}", id->dump()), where);
      }
    }
    auto it = x.find("is_correct");
    if (it == x.end()) {
      rep.error("MISSING_FIELD", "missing field 'is_correct'", where + ".is_correct");
    } else if (!parse_flag(*it)) {
      rep.error("BAD_ENUM", "is_correct must be 0/1 or boolean", where + ".is_correct");
    }
    if (const Json* t = text_field(x, "type", rep, where)) {
      if (!conclusion_kind_from_string(t->get<std::string>())) {
        rep.error("BAD_KIND", fmt::format("unknown conclusion type {}", t->dump()), where + ".type");
      }
    }
  }
}

void validate_tree_record(const Json& j, ValidationReport& rep) {
  check_non_empty(text_field(j, "trace_id", rep), "EMPTY_ID", "trace_id", rep, "trace_id");
  const Json* t = field(j, "tree", Json::value_t::object, rep);
  if (!t) return;
  GroupedTree tree;
  try {
    tree = tree_from_json(*t);
  } catch (const Error& e) {
    rep.error("PARSE", e.what(), "tree");
    return;
  }
  int max_label = 0;
  for (const auto& n : tree.nodes()) {
    for (int l : n.labels) max_label = std::max(max_label, l);
  }
  ValidationReport tree_rep = validate_tree(tree, std::max(max_label, 1));
  for (auto& d : tree_rep.diagnostics) rep.diagnostics.push_back(std::move(d));
}

std::string record_id_of(const Json& j) {
  if (!j.is_object()) return {};
  for (const char* key : {"id", "trace_id"}) {
    if (auto it = j.find(key); it != j.end() && it->is_string()) return it->get<std::string>();
  }
  return {};
}

}  // namespace

ValidationReport validate_value(const Json& record, SchemaKind kind) {
  ValidationReport rep;
  rep.record_id = record_id_of(record);
  if (!record.is_object()) {
    rep.error("BAD_TYPE", "record is not a JSON object", "$");
    return rep;
  }
  switch (kind) {
    case SchemaKind::problem: validate_problem(record, rep); break;
    case SchemaKind::trace: validate_trace(record, rep); break;
    case SchemaKind::nodes: validate_nodes(record, rep); break;
    case SchemaKind::labels: validate_labels(record, rep); break;
    case SchemaKind::judgments: validate_judgments(record, rep); break;
    case SchemaKind::tree: validate_tree_record(record, rep); break;
  }
  return rep;
}

ValidationReport validate_record(std::string_view line, SchemaKind kind) {
  Json parsed;
  try {
    parsed = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    ValidationReport rep;
    rep.error("PARSE", e.what(), fmt::format("byte {}", e.byte));
    return rep;
  }
  return validate_value(parsed, kind);
}

std::vector<LineReport> validate_file(const std::string& path, SchemaKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path));
  std::vector<LineReport> out;
  std::unordered_map<std::string, std::size_t> first_seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    ValidationReport rep = validate_record(line, kind);
    if (!rep.record_id.empty()) {
      auto [it, inserted] = first_seen.emplace(rep.record_id, lineno);
      if (!inserted) {
        rep.error("DUPLICATE_ID",
                  fmt::format("id '{}' already used on line {}", rep.record_id, it->second),
                  "id");
      }
    }
    if (!rep.diagnostics.empty()) out.push_back({lineno, std::move(rep)});
  }
  return out;
}

}  // namespace cotkit
