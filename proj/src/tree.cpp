#include "cotkit/tree.hpp"

#include <functional>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "cotkit/text_util.hpp"

namespace cotkit {

std::size_t GroupedTree::add_node(std::optional<std::size_t> parent, std::string id,
                                  std::vector<int> labels) {
  TreeNode n;
  n.id = std::move(id);
  n.labels = std::move(labels);
  n.parent = parent;
  n.depth = parent ? nodes_.at(*parent).depth + 1 : 0;
  std::size_t pos = nodes_.size();
  nodes_.push_back(std::move(n));
  if (parent) nodes_[*parent].children.push_back(pos);
  return pos;
}

Json GroupedTree::to_json() const {
  if (nodes_.empty()) return Json(nullptr);
  std::function<Json(std::size_t)> build = [&](std::size_t i) {
    const TreeNode& n = nodes_[i];
    Json j{{"id", n.id}, {"label", format_label_group(n.labels)}};
    if (!n.children.empty()) {
      Json kids = Json::array();
      for (std::size_t c : n.children) kids.push_back(build(c));
      j["children"] = std::move(kids);
    }
    return j;
  };
  return build(0);
}

std::vector<int> parse_label_group(std::string_view textv) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= textv.size()) {
    std::size_t comma = textv.find(',', start);
    std::string_view piece =
        textv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto idx = parse_node_label(piece);
    if (!idx) throw Error(ErrorCode::parse, fmt::format("bad node label '{}' in \"{}\"", piece, textv));
    out.push_back(*idx);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_label_group(const std::vector<int>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += node_label(labels[i]);
  }
  return out;
}

namespace {

std::vector<int> labels_of(const Json& node) {
  auto it = node.find("label");
  if (it == node.end()) throw Error(ErrorCode::parse, "tree node without 'label'");
  std::vector<int> labels;
  if (it->is_string()) {
    labels = parse_label_group(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& l : *it) {
      if (!l.is_string()) throw Error(ErrorCode::parse, "tree label list must hold strings");
      for (int x : parse_label_group(l.get<std::string>())) labels.push_back(x);
    }
  } else {
    throw Error(ErrorCode::parse, "tree 'label' must be a string");
  }
  if (labels.empty()) throw Error(ErrorCode::parse, "tree node with no labels");
  return labels;
}

std::string id_of(const Json& node, const std::string& fallback) {
  auto it = node.find("id");
  if (it == node.end() || it->is_null()) return fallback;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  throw Error(ErrorCode::parse, "tree 'id' must be a string");
}

void build(GroupedTree& tree, const Json& node, std::optional<std::size_t> parent,
           const std::string& fallback_id) {
  if (!node.is_object()) throw Error(ErrorCode::parse, "tree node is not a JSON object");
  std::string id = id_of(node, fallback_id);
  std::size_t pos = tree.add_node(parent, id, labels_of(node));
  auto it = node.find("children");
  if (it == node.end() || it->is_null()) return;
  if (!it->is_array()) throw Error(ErrorCode::parse, "tree 'children' must be an array");
  std::size_t k = 1;
  for (const auto& child : *it) build(tree, child, pos, fallback_id + "." + std::to_string(k++));
}

bool looks_like_tree(const Json& j) { return j.is_object() && j.contains("label"); }

std::optional<Json> try_parse(std::string_view s) {
  Json j = Json::parse(s.begin(), s.end(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

// Last fenced block (``` or ```json) whose body parses as a tree.
std::optional<Json> from_fences(std::string_view response) {
  std::optional<Json> found;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = response.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t body = response.find('\n', open);
    if (body == std::string_view::npos) break;
    std::size_t close = response.find("```", body);
    if (close == std::string_view::npos) break;
    if (auto j = try_parse(response.substr(body + 1, close - body - 1)); j && looks_like_tree(*j)) {
      found = std::move(j);
    }
    pos = close + 3;
  }
  return found;
}

// Last balanced top-level {...} span that parses as a tree.
std::optional<Json> from_braces(std::string_view response) {
  std::optional<Json> found;
  std::size_t start = response.find('{');
  while (start != std::string_view::npos) {
    int depth = 0;
    bool in_string = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t i = start; i < response.size(); ++i) {
      char c = response[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        end = i;
        break;
      }
    }
    if (end != std::string_view::npos) {
      if (auto j = try_parse(response.substr(start, end - start + 1)); j && looks_like_tree(*j)) {
        found = std::move(j);
        start = response.find('{', end + 1);
        continue;
      }
    }
    start = response.find('{', start + 1);
  }
  return found;
}

GroupedTree finish(GroupedTree tree, const TreeParseOptions& options) {
  int max_label = 0;
  for (const auto& n : tree.nodes()) {
    for (int l : n.labels) max_label = std::max(max_label, l);
  }
  int m = options.source_count.value_or(max_label);
  if (options.repair) repair_trailing_labels(tree, m);
  ValidationReport rep = validate_tree(tree, std::max(m, 1));
  rep.record_id = tree.trace_id();
  if (!rep.ok()) {
    std::string first;
    for (const auto& d : rep.diagnostics) {
      if (d.severity == Severity::error) {
        first = d.code + ": " + d.message;
        break;
      }
    }
    ErrorCode code = rep.has("SEQUENTIAL") ? ErrorCode::sequential : ErrorCode::invalid_tree;
    throw TreeValidationError(code, "tree rejected: " + first, std::move(rep));
  }
  return tree;
}

}  // namespace

GroupedTree tree_from_json(const Json& node) {
  GroupedTree tree;
  build(tree, node, std::nullopt, "1");
  return tree;
}

GroupedTree parse_tree(const Json& tree, const TreeParseOptions& options) {
  return finish(tree_from_json(tree), options);
}

GroupedTree parse_tree(std::string_view response, const TreeParseOptions& options) {
  std::string_view body = text::trim(response);
  std::optional<Json> parsed = try_parse(body);
  if (options.strict) {
    if (!parsed || !parsed->is_object()) {
      throw Error(ErrorCode::parse, "strict mode: response is not exactly one JSON tree object");
    }
  } else if (!parsed || !looks_like_tree(*parsed)) {
    parsed = from_fences(response);
    if (!parsed) parsed = from_braces(response);
  }
  if (!parsed) throw Error(ErrorCode::parse, "no tree object found in response");
  return parse_tree(*parsed, options);
}

ValidationReport validate_tree(const GroupedTree& tree, int source_count) {
  ValidationReport rep;
  rep.record_id = tree.trace_id();
  if (source_count < 1) throw Error(ErrorCode::usage, "source count must be >= 1");
  if (tree.empty()) {
    rep.error("EMPTY_TREE", "tree has no nodes");
    return rep;
  }

  std::unordered_map<std::string, std::size_t> ids;
  std::set<int> seen;
  int last = 0;
  for (std::size_t pos = 0; pos < tree.node_count(); ++pos) {
    const TreeNode& n = tree.node(pos);
    std::string where = fmt::format("node '{}'", n.id);
    if (auto [it, fresh] = ids.emplace(n.id, pos); !fresh) {
      rep.error("DUPLICATE_ID", fmt::format("tree id '{}' used twice", n.id), where);
    }
    for (std::size_t k = 0; k < n.labels.size(); ++k) {
      int label = n.labels[k];
      if (label < 1 || label > source_count) {
        rep.error("LABEL_RANGE",
                  fmt::format("{} outside N1..N{}", node_label(label), source_count), where);
      }
      if (!seen.insert(label).second) {
        rep.error("DUPLICATE_LABEL", fmt::format("{} appears in more than one place", node_label(label)),
                  where);
        continue;
      }
      if (label < last) {
        rep.error("SEQUENTIAL",
                  fmt::format("{} placed after {} in pre-order", node_label(label), node_label(last)),
                  where);
      } else if (k > 0 && label != n.labels[k - 1] + 1 && label > n.labels[k - 1]) {
        rep.error("NONCONSECUTIVE_GROUP",
                  fmt::format("grouped labels {} are not consecutive", format_label_group(n.labels)),
                  where);
      }
      last = std::max(last, label);
    }
  }
  for (int i = 1; i <= source_count; ++i) {
    if (!seen.count(i)) {
      rep.warning("MISSING_LABEL", fmt::format("{} does not appear in the tree", node_label(i)));
    }
  }
  return rep;
}

std::size_t repair_trailing_labels(GroupedTree& tree, int source_count) {
  if (tree.empty()) return 0;
  int max_label = 0;
  for (const auto& n : tree.nodes()) {
    for (int l : n.labels) max_label = std::max(max_label, l);
  }
  std::size_t anchor = tree.node_count() - 1;
  std::string base = tree.node(anchor).id;
  std::size_t added = 0;
  std::size_t k = tree.node(anchor).children.size();
  for (int i = max_label + 1; i <= source_count; ++i) {
    tree.add_node(anchor, fmt::format("{}.r{}", base, ++k), {i});
    ++added;
  }
  return added;
}

std::optional<std::size_t> GroupMap::node_of(int source_index) const {
  auto it = map_.find(source_index);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

GroupMap group_map(const GroupedTree& tree) {
  GroupMap g;
  for (std::size_t pos = 0; pos < tree.node_count(); ++pos) {
    for (int l : tree.node(pos).labels) g.assign(l, pos);
  }
  return g;
}

int depth_of(const GroupedTree& tree, int source_index) {
  for (const auto& n : tree.nodes()) {
    for (int l : n.labels) {
      if (l == source_index) return n.depth;
    }
  }
  throw Error(ErrorCode::not_found, fmt::format("{} is not in the tree", node_label(source_index)));
}

}  // namespace cotkit
