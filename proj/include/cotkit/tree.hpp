#pragma once

// Grouped n-ary reasoning trees. Each tree node groups one or more
// consecutive source nodes; structure comes only from nesting, the
// annotator's dotted ids are carried verbatim.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cotkit/records.hpp"
#include "cotkit/validate.hpp"

namespace cotkit {

struct TreeNode {
  std::string id;
  std::vector<int> labels;  // source indices, e.g. {3, 4} for "N3, N4"
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
  int depth = 0;
};

/// Nodes are stored in pre-order; index 0 is the root.
class GroupedTree {
 public:
  GroupedTree() = default;

  const std::string& trace_id() const { return trace_id_; }
  void set_trace_id(std::string id) { trace_id_ = std::move(id); }

  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  /// Appends a node under `parent` (nullopt for the root) and returns its
  /// position. Children must be added in pre-order.
  std::size_t add_node(std::optional<std::size_t> parent, std::string id, std::vector<int> labels);

  /// Nested {id, label, children} form; leaves omit "children".
  Json to_json() const;

 private:
  std::string trace_id_;
  std::vector<TreeNode> nodes_;
};

struct TreeParseOptions {
  // Strict: the whole response must be exactly one JSON tree object.
  bool strict = false;
  // Number of source nodes, when known; defaults to the largest label.
  std::optional<int> source_count;
  // Append missing trailing labels under the last pre-order node.
  bool repair = false;
};

/// Thrown when a structurally parsed tree fails validation.
class TreeValidationError : public Error {
 public:
  TreeValidationError(ErrorCode code, const std::string& message, ValidationReport report)
      : Error(code, message), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Builds a tree from an already parsed {id, label, children} object.
/// Structure only; throws Error(parse).
GroupedTree tree_from_json(const Json& node);

/// Locates and parses the tree object in an annotator response (fences and
/// prose tolerated unless strict), then validates it. Order violations throw
/// TreeValidationError with code SEQUENTIAL, other validation errors with
/// INVALID_TREE.
GroupedTree parse_tree(std::string_view response, const TreeParseOptions& options = {});
GroupedTree parse_tree(const Json& tree, const TreeParseOptions& options = {});
inline GroupedTree parse_tree(const std::string& response, const TreeParseOptions& options = {}) {
  return parse_tree(std::string_view(response), options);
}
inline GroupedTree parse_tree(const char* response, const TreeParseOptions& options = {}) {
  return parse_tree(std::string_view(response), options);
}

/// Splits "N3, N4" into {3, 4}. Throws Error(parse) on malformed labels.
std::vector<int> parse_label_group(std::string_view text);
std::string format_label_group(const std::vector<int>& labels);

/// Checks pre-order label monotonicity, label range, duplicates and id
/// uniqueness. Missing labels are warnings.
ValidationReport validate_tree(const GroupedTree& tree, int source_count);

/// Adds every label in (max present, source_count] as a new child of the
/// last pre-order node. Returns the number of appended nodes.
std::size_t repair_trailing_labels(GroupedTree& tree, int source_count);

/// The function g: source index -> position of the tree node holding it.
class GroupMap {
 public:
  std::optional<std::size_t> node_of(int source_index) const;
  const std::map<int, std::size_t>& entries() const { return map_; }
  void assign(int source_index, std::size_t node) { map_[source_index] = node; }

 private:
  std::map<int, std::size_t> map_;
};

GroupMap group_map(const GroupedTree& tree);

/// Depth in edges of the tree node containing `source_index`; throws
/// Error(not_found) when absent.
int depth_of(const GroupedTree& tree, int source_index);

}  // namespace cotkit
