#pragma once

// Per-trace structure metrics: tree morphology, answer boundary and
// node-type distribution. Depths are counted in edges, variances are
// population variances.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cotkit/answer.hpp"
#include "cotkit/records.hpp"
#include "cotkit/tree.hpp"

namespace cotkit {

struct MorphologyReport {
  int total_tree_nodes = 0;
  int max_depth = 0;
  int max_width = 0;
  double width_depth_ratio = 0;
  double mean_leaf_depth = 0;
  double leaf_depth_variance = 0;
  double mean_branching = 0;
  int max_branching = 0;
  double branching_variance = 0;
  double structural_efficiency = 0;
  long long sackin = 0;
  long long gen_colless = 0;
};

/// Metric keys in report order, with their table captions.
struct MetricInfo {
  const char* key;
  const char* title;
};
inline constexpr std::array<MetricInfo, 12> kMorphologyMetrics{{
    {"total_tree_nodes", "Total tree nodes"},
    {"max_depth", "Maximum depth"},
    {"max_width", "Maximum width"},
    {"width_depth_ratio", "Width-to-depth ratio"},
    {"mean_leaf_depth", "Mean leaf depth"},
    {"leaf_depth_variance", "Leaf depth variance"},
    {"mean_branching", "Mean branching factor"},
    {"max_branching", "Maximum branching factor"},
    {"branching_variance", "Branching variance"},
    {"structural_efficiency", "Structural efficiency"},
    {"sackin", "Sackin index"},
    {"gen_colless", "Generalized Colless index"},
}};

/// Values in kMorphologyMetrics order.
std::array<double, 12> metric_values(const MorphologyReport& r);

Json to_json(const MorphologyReport& r);
MorphologyReport morphology_from_json(const Json& j);

/// Throws Error(usage) on an empty tree.
MorphologyReport morphology(const GroupedTree& tree);

struct AnswerBoundary {
  std::optional<CanonicalAnswer> proxy;
  std::optional<int> proxy_index;
  std::optional<int> earliest_index;
  std::optional<int> earliest_depth;
  std::optional<int> post_answer_gap;
  bool excluded = true;
  std::vector<std::string> warnings;
};

Json to_json(const AnswerBoundary& b);

/// Proxy: extraction from the latest node with a boxed answer or the literal
/// "Final Answer". Earliest index: first node whose extracted answer
/// matches the proxy, else first node containing the proxy surface as a
/// whole token. The tree may be null; depth is then absent.
AnswerBoundary answer_boundary(const SourceNodeSequence& seq, const GroupedTree* tree);

struct NodeTypeDistribution {
  // Indexed like kAllNodeTypes.
  std::array<double, 5> fraction{};
  std::array<int, 5> count{};
  int total = 0;

  double of(NodeType t) const;
};

Json to_json(const NodeTypeDistribution& d);

/// Throws Error(usage) on an empty list.
NodeTypeDistribution node_type_distribution(const std::vector<TaxonomyLabel>& labels);

/// Everything the metrics stage records for one trace.
struct TraceMetrics {
  std::string trace_id;
  std::string problem_id;
  int source_nodes = 0;
  std::optional<MorphologyReport> morphology;
  AnswerBoundary boundary;
  std::optional<NodeTypeDistribution> node_types;
  std::size_t tokens = 0;

  Json to_json() const;
};

/// Reads back the fields the report needs.
TraceMetrics trace_metrics_from_json(const Json& j);

}  // namespace cotkit
