#include "cotkit/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cotkit/text_util.hpp"

namespace cotkit {

namespace {

double population_variance(const std::vector<double>& xs, double mean) {
  if (xs.empty()) return 0;
  double acc = 0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size());
}

// Whole-token occurrence: the neighbours of the match are not alphanumeric.
bool contains_token(std::string_view hay, std::string_view needle) {
  if (needle.empty()) return false;
  // "12" is not a token of "12.5", "0.12" or "1,120".
  auto glued = [&](std::size_t sep, std::size_t beyond) {
    return (hay[sep] == '.' || hay[sep] == ',') && beyond < hay.size() && text::is_digit(hay[beyond]);
  };
  for (std::size_t p = hay.find(needle); p != std::string_view::npos; p = hay.find(needle, p + 1)) {
    bool left = p == 0 || (!text::is_alnum(hay[p - 1]) && !(p >= 2 && glued(p - 1, p - 2)));
    std::size_t end = p + needle.size();
    bool right = end >= hay.size() || (!text::is_alnum(hay[end]) && !glued(end, end + 1));
    if (left && right) return true;
  }
  return false;
}

Json opt(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<int> opt_int(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<int>();
}

}  // namespace

std::array<double, 12> metric_values(const MorphologyReport& r) {
  return {static_cast<double>(r.total_tree_nodes), static_cast<double>(r.max_depth),
          static_cast<double>(r.max_width),        r.width_depth_ratio,
          r.mean_leaf_depth,                       r.leaf_depth_variance,
          r.mean_branching,                        static_cast<double>(r.max_branching),
          r.branching_variance,                    r.structural_efficiency,
          static_cast<double>(r.sackin),           static_cast<double>(r.gen_colless)};
}

Json to_json(const MorphologyReport& r) {
  return Json{{"total_tree_nodes", r.total_tree_nodes},
              {"max_depth", r.max_depth},
              {"max_width", r.max_width},
              {"width_depth_ratio", r.width_depth_ratio},
              {"mean_leaf_depth", r.mean_leaf_depth},
              {"leaf_depth_variance", r.leaf_depth_variance},
              {"mean_branching", r.mean_branching},
              {"max_branching", r.max_branching},
              {"branching_variance", r.branching_variance},
              {"structural_efficiency", r.structural_efficiency},
              {"sackin", r.sackin},
              {"gen_colless", r.gen_colless}};
}

MorphologyReport morphology_from_json(const Json& j) {
  MorphologyReport r;
  try {
    r.total_tree_nodes = j.at("total_tree_nodes").get<int>();
    r.max_depth = j.at("max_depth").get<int>();
    r.max_width = j.at("max_width").get<int>();
    r.width_depth_ratio = j.at("width_depth_ratio").get<double>();
    r.mean_leaf_depth = j.at("mean_leaf_depth").get<double>();
    r.leaf_depth_variance = j.at("leaf_depth_variance").get<double>();
    r.mean_branching = j.at("mean_branching").get<double>();
    r.max_branching = j.at("max_branching").get<int>();
    r.branching_variance = j.at("branching_variance").get<double>();
    r.structural_efficiency = j.at("structural_efficiency").get<double>();
    r.sackin = j.at("sackin").get<long long>();
    r.gen_colless = j.at("gen_colless").get<long long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, fmt::format("bad morphology record: {}", e.what()));
  }
  return r;
}

MorphologyReport morphology(const GroupedTree& tree) {
  if (tree.empty()) throw Error(ErrorCode::usage, "morphology of an empty tree");
  const auto& nodes = tree.nodes();
  const std::size_t n = nodes.size();
  MorphologyReport r;
  r.total_tree_nodes = static_cast<int>(n);

  std::vector<int> width;
  std::vector<double> leaf_depths;
  std::vector<double> branching;
  for (const auto& v : nodes) {
    if (static_cast<std::size_t>(v.depth) >= width.size()) width.resize(v.depth + 1, 0);
    ++width[v.depth];
    if (v.children.empty()) {
      leaf_depths.push_back(v.depth);
      r.sackin += v.depth;
      r.max_depth = std::max(r.max_depth, v.depth);
    } else {
      branching.push_back(static_cast<double>(v.children.size()));
      r.max_branching = std::max(r.max_branching, static_cast<int>(v.children.size()));
    }
  }
  r.max_width = *std::max_element(width.begin(), width.end());
  r.width_depth_ratio = r.max_depth == 0 ? 0.0 : static_cast<double>(r.max_width) / r.max_depth;

  r.mean_leaf_depth = static_cast<double>(r.sackin) / static_cast<double>(leaf_depths.size());
  r.leaf_depth_variance = population_variance(leaf_depths, r.mean_leaf_depth);
  if (!branching.empty()) {
    double sum = 0;
    for (double b : branching) sum += b;
    r.mean_branching = sum / static_cast<double>(branching.size());
    r.branching_variance = population_variance(branching, r.mean_branching);
  }
  r.structural_efficiency = static_cast<double>(r.max_depth + 1) / static_cast<double>(n);

  // Pre-order storage: children follow their parent, so a reverse sweep
  // sees every subtree before its root.
  std::vector<long long> leaves(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    const auto& v = nodes[i];
    if (v.children.empty()) {
      leaves[i] = 1;
      continue;
    }
    std::vector<long long> counts;
    counts.reserve(v.children.size());
    for (std::size_t c : v.children) {
      leaves[i] += leaves[c];
      counts.push_back(leaves[c]);
    }
    // Sum of pairwise |a - b| over sorted values: each x_j contributes
    // j * x_j minus the sum of the j values before it.
    std::sort(counts.begin(), counts.end());
    long long prefix = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      r.gen_colless += static_cast<long long>(j) * counts[j] - prefix;
      prefix += counts[j];
    }
  }
  return r;
}

Json to_json(const AnswerBoundary& b) {
  Json j{{"excluded", b.excluded}};
  if (b.proxy) {
    j["proxy"] = Json{{"surface", b.proxy->surface}, {"canonical", b.proxy->canonical}};
  } else {
    j["proxy"] = nullptr;
  }
  j["proxy_index"] = opt(b.proxy_index);
  j["earliest_index"] = opt(b.earliest_index);
  j["earliest_depth"] = opt(b.earliest_depth);
  j["post_answer_gap"] = opt(b.post_answer_gap);
  j["warnings"] = b.warnings;
  return j;
}

AnswerBoundary answer_boundary(const SourceNodeSequence& seq, const GroupedTree* tree) {
  AnswerBoundary b;
  const auto& nodes = seq.nodes;
  const int m = static_cast<int>(nodes.size());

  for (int i = m; i >= 1; --i) {
    const std::string& t = nodes[i - 1].text;
    if (!has_final_answer_marker(t)) continue;
    if (auto a = extract_answer(t)) {
      b.proxy = std::move(a);
      b.proxy_index = i;
      break;
    }
  }
  if (!b.proxy) return b;

  bool multi = false;
  for (int i = 1; i <= *b.proxy_index; ++i) {
    const std::string& t = nodes[i - 1].text;
    bool hit = false;
    if (auto a = extract_answer(t)) {
      hit = answers_match(*a, *b.proxy);
      if (!hit && has_final_answer_marker(t)) multi = true;
    } else {
      hit = contains_token(t, b.proxy->surface);
    }
    if (hit && !b.earliest_index) b.earliest_index = i;
  }
  if (multi) {
    b.warnings.push_back(fmt::format("MULTI_ANSWER: earlier final answers differ from proxy '{}'",
                                     b.proxy->surface));
  }
  // The proxy node always matches itself, so this is set.
  b.excluded = false;
  b.post_answer_gap = m - *b.earliest_index;
  if (tree && !tree->empty()) {
    if (auto pos = group_map(*tree).node_of(*b.earliest_index)) {
      b.earliest_depth = tree->node(*pos).depth;
    } else {
      b.warnings.push_back(fmt::format("MISSING_LABEL: {} is not in the tree; depth unavailable",
                                       node_label(*b.earliest_index)));
    }
  }
  return b;
}

double NodeTypeDistribution::of(NodeType t) const {
  for (std::size_t i = 0; i < kAllNodeTypes.size(); ++i) {
    if (kAllNodeTypes[i] == t) return fraction[i];
  }
  return 0;
}

Json to_json(const NodeTypeDistribution& d) {
  Json fractions = Json::object();
  Json counts = Json::object();
  for (std::size_t i = 0; i < kAllNodeTypes.size(); ++i) {
    std::string name(to_string(kAllNodeTypes[i]));
    fractions[name] = d.fraction[i];
    counts[name] = d.count[i];
  }
  return Json{{"total", d.total}, {"counts", counts}, {"fractions", fractions}};
}

NodeTypeDistribution node_type_distribution(const std::vector<TaxonomyLabel>& labels) {
  if (labels.empty()) throw Error(ErrorCode::usage, "node-type distribution of an empty label list");
  NodeTypeDistribution d;
  for (const auto& l : labels) {
    for (std::size_t i = 0; i < kAllNodeTypes.size(); ++i) {
      if (kAllNodeTypes[i] == l.primary) ++d.count[i];
    }
  }
  d.total = static_cast<int>(labels.size());
  for (std::size_t i = 0; i < d.fraction.size(); ++i) {
    d.fraction[i] = static_cast<double>(d.count[i]) / d.total;
  }
  return d;
}

Json TraceMetrics::to_json() const {
  Json j{{"trace_id", trace_id}};
  if (!problem_id.empty()) j["problem_id"] = problem_id;
  j["source_nodes"] = source_nodes;
  j["tokens"] = tokens;
  j["morphology"] = morphology ? cotkit::to_json(*morphology) : Json(nullptr);
  j["answer_boundary"] = cotkit::to_json(boundary);
  j["node_types"] = node_types ? cotkit::to_json(*node_types) : Json(nullptr);
  return j;
}

TraceMetrics trace_metrics_from_json(const Json& j) {
  TraceMetrics t;
  try {
    t.trace_id = j.at("trace_id").get<std::string>();
    if (j.contains("problem_id")) t.problem_id = j["problem_id"].get<std::string>();
    t.source_nodes = j.value("source_nodes", 0);
    t.tokens = j.value("tokens", std::size_t{0});
    if (j.contains("morphology") && !j["morphology"].is_null()) {
      t.morphology = morphology_from_json(j["morphology"]);
    }
    if (j.contains("answer_boundary")) {
      const Json& b = j["answer_boundary"];
      t.boundary.excluded = b.value("excluded", true);
      if (b.contains("proxy") && b["proxy"].is_object()) {
        CanonicalAnswer a = normalize_answer(b["proxy"].value("surface", std::string()));
        t.boundary.proxy = std::move(a);
      }
      t.boundary.proxy_index = opt_int(b, "proxy_index");
      t.boundary.earliest_index = opt_int(b, "earliest_index");
      t.boundary.earliest_depth = opt_int(b, "earliest_depth");
      t.boundary.post_answer_gap = opt_int(b, "post_answer_gap");
      if (b.contains("warnings")) t.boundary.warnings = b["warnings"].get<std::vector<std::string>>();
    }
    if (j.contains("node_types") && j["node_types"].is_object()) {
      const Json& nt = j["node_types"];
      NodeTypeDistribution d;
      d.total = nt.value("total", 0);
      for (std::size_t i = 0; i < kAllNodeTypes.size(); ++i) {
        std::string name(to_string(kAllNodeTypes[i]));
        d.count[i] = nt.at("counts").value(name, 0);
        d.fraction[i] = nt.at("fractions").value(name, 0.0);
      }
      t.node_types = d;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, fmt::format("bad metrics record: {}", e.what()));
  }
  return t;
}

}  // namespace cotkit
