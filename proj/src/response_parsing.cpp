#include <map>

#include <fmt/format.h>

#include "cotkit/annotator.hpp"
#include "cotkit/text_util.hpp"

namespace cotkit {

namespace {

struct JsonLine {
  std::size_t lineno;
  Json value;
};

// Collects the JSON objects found one per line. Fence lines and prose are
// skipped in lenient mode; a line that opens like JSON but does not parse
// is always an error.
std::vector<JsonLine> json_lines(std::string_view response, bool strict) {
  std::vector<JsonLine> out;
  auto lines = text::split_lines(response);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = text::trim(lines[i]);
    if (line.empty()) continue;
    std::size_t lineno = i + 1;
    if (line.front() != '{' && line.front() != '[') {
      if (strict) {
        throw Error(ErrorCode::parse,
                    fmt::format("line {}: non-JSON content in strict mode", lineno));
      }
      // Tolerate list markers or other lead-in before an object on the line.
      std::size_t brace = line.find('{');
      if (brace == std::string_view::npos || line.back() != '}') continue;
      Json j = Json::parse(line.substr(brace), nullptr, false);
      if (!j.is_discarded() && j.is_object()) out.push_back({lineno, std::move(j)});
      continue;
    }
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      // Bracketed prose such as "[N3] restates the goal" is not JSON.
      if (line.front() == '[' && !strict) continue;
      throw Error(ErrorCode::parse, fmt::format("line {}: malformed JSON", lineno));
    }
    if (j.is_array()) {
      for (auto& item : j) out.push_back({lineno, item});
    } else {
      out.push_back({lineno, std::move(j)});
    }
  }
  return out;
}

}  // namespace

std::vector<TaxonomyLabel> parse_taxonomy_labels(std::string_view response, int m,
                                                 const ResponseParseOptions& options) {
  if (m < 1) throw Error(ErrorCode::usage, "node count must be >= 1");
  std::map<int, TaxonomyLabel> by_index;
  for (auto& [lineno, j] : json_lines(response, options.strict)) {
    if (!j.is_object() || !j.contains("taxonomy_primary_type")) {
      if (options.strict) {
        throw Error(ErrorCode::parse, fmt::format("line {}: not a taxonomy label object", lineno));
      }
      continue;
    }
    TaxonomyLabel label;
    try {
      label = taxonomy_label_from_json(j);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("line {}: {}", lineno, e.what()));
    }
    auto idx = parse_node_label(label.node_label);
    if (!idx) {
      throw Error(ErrorCode::parse, fmt::format("line {}: bad node id '{}'", lineno, label.node_label));
    }
    if (*idx > m) {
      throw Error(ErrorCode::range, fmt::format("line {}: {} is beyond N{}", lineno, label.node_label, m));
    }
    label.node_label = node_label(*idx);
    if (!by_index.emplace(*idx, label).second) {
      throw Error(ErrorCode::duplicate, fmt::format("line {}: {} labeled twice", lineno, label.node_label));
    }
  }
  std::vector<std::string> missing;
  std::vector<TaxonomyLabel> out;
  for (int i = 1; i <= m; ++i) {
    auto it = by_index.find(i);
    if (it == by_index.end()) {
      missing.push_back(node_label(i));
    } else {
      out.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::incomplete, fmt::format("no label for {}", list));
  }
  return out;
}

std::vector<ConclusionJudgment> parse_conclusion_judgments(std::string_view response,
                                                           const ResponseParseOptions& options,
                                                           std::vector<std::string>* warnings) {
  std::vector<ConclusionJudgment> out;
  if (text::trim(response).empty()) {
    if (warnings) warnings->push_back("empty judgment response");
    return out;
  }
  for (auto& [lineno, j] : json_lines(response, options.strict)) {
    if (!j.is_object() || !j.contains("conclusion_node")) {
      if (options.strict) {
        throw Error(ErrorCode::parse, fmt::format("line {}: not a judgment object", lineno));
      }
      continue;
    }
    try {
      ConclusionJudgment cj = judgment_from_json(j);
      if (auto idx = parse_node_label(cj.node_label)) {
        cj.node_label = node_label(*idx);
      } else {
        throw Error(ErrorCode::parse, fmt::format("bad node id '{}'", cj.node_label));
      }
      out.push_back(std::move(cj));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("line {}: {}", lineno, e.what()));
    }
  }
  if (out.empty() && warnings) warnings->push_back("no judgment lines found in response");
  return out;
}

}  // namespace cotkit
