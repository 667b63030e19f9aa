#pragma once

// Shared helpers for the test binaries: deterministic generators and
// deliberately naive reference implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cotkit/metrics.hpp"
#include "cotkit/tree.hpp"

namespace testkit {

inline std::filesystem::path data_dir() { return COTKIT_TEST_DATA; }
inline std::filesystem::path source_dir() { return COTKIT_SOURCE_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cotkit_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // [lo, hi]
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
  bool coin(double p = 0.5) { return real() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(uniform(0, int(v.size()) - 1))]; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Plain adjacency lists; node 0 is the root.
struct PlainTree {
  std::vector<std::vector<int>> kids;
  int size() const { return static_cast<int>(kids.size()); }
};

enum class Shape { random_recursive, path, star, caterpillar, broom, binary };

inline PlainTree make_tree(Rng& rng, int n, Shape shape) {
  PlainTree t;
  t.kids.resize(static_cast<std::size_t>(n));
  auto link = [&](int parent, int child) { t.kids[parent].push_back(child); };
  switch (shape) {
    case Shape::random_recursive:
      for (int v = 1; v < n; ++v) link(rng.uniform(0, v - 1), v);
      break;
    case Shape::path:
      for (int v = 1; v < n; ++v) link(v - 1, v);
      break;
    case Shape::star:
      for (int v = 1; v < n; ++v) link(0, v);
      break;
    case Shape::caterpillar: {
      // spine 0..s-1, the rest hang off random spine nodes
      int spine = std::max(1, rng.uniform(1, n));
      for (int v = 1; v < spine; ++v) link(v - 1, v);
      for (int v = spine; v < n; ++v) link(rng.uniform(0, spine - 1), v);
      break;
    }
    case Shape::broom: {
      int handle = rng.uniform(1, n);
      for (int v = 1; v < handle; ++v) link(v - 1, v);
      for (int v = handle; v < n; ++v) link(handle - 1, v);
      break;
    }
    case Shape::binary:
      for (int v = 1; v < n; ++v) link((v - 1) / 2, v);
      break;
  }
  return t;
}

// Pre-order copy into a GroupedTree; labels are the pre-order positions.
inline cotkit::GroupedTree to_grouped(const PlainTree& t) {
  cotkit::GroupedTree g;
  int next_label = 1;
  std::function<void(int, std::optional<std::size_t>, const std::string&)> visit =
      [&](int v, std::optional<std::size_t> parent, const std::string& id) {
        std::size_t pos = g.add_node(parent, id, {next_label++});
        int k = 1;
        for (int c : t.kids[v]) visit(c, pos, id + "." + std::to_string(k++));
      };
  visit(0, std::nullopt, "1");
  return g;
}

// Reference metrics straight from the definitions, recursion everywhere.
struct NaiveMetrics {
  int nodes = 0, max_depth = 0, max_width = 0, max_branching = 0;
  double wdr = 0, mean_leaf_depth = 0, leaf_depth_var = 0, mean_branching = 0, branching_var = 0, efficiency = 0;
  long long sackin = 0, colless = 0;
};

inline int naive_leaves(const PlainTree& t, int v) {
  if (t.kids[v].empty()) return 1;
  int s = 0;
  for (int c : t.kids[v]) s += naive_leaves(t, c);
  return s;
}

inline int naive_height(const PlainTree& t, int v) {
  int h = 0;
  for (int c : t.kids[v]) h = std::max(h, 1 + naive_height(t, c));
  return h;
}

inline NaiveMetrics naive_metrics(const PlainTree& t) {
  NaiveMetrics m;
  std::vector<int> leaf_depths;
  std::vector<int> branching;
  std::map<int, int> per_level;
  std::function<void(int, int)> walk = [&](int v, int d) {
    ++m.nodes;
    ++per_level[d];
    if (t.kids[v].empty()) {
      leaf_depths.push_back(d);
    } else {
      branching.push_back(static_cast<int>(t.kids[v].size()));
      const auto& ks = t.kids[v];
      for (std::size_t a = 0; a < ks.size(); ++a)
        for (std::size_t b = a + 1; b < ks.size(); ++b)
          m.colless += std::abs(naive_leaves(t, ks[a]) - naive_leaves(t, ks[b]));
    }
    for (int c : t.kids[v]) walk(c, d + 1);
  };
  walk(0, 0);

  m.max_depth = naive_height(t, 0);
  for (auto& [_, w] : per_level) m.max_width = std::max(m.max_width, w);
  m.wdr = m.max_depth == 0 ? 0.0 : double(m.max_width) / m.max_depth;

  auto mean_var = [](const std::vector<int>& xs, double& mean, double& var) {
    mean = var = 0;
    if (xs.empty()) return;
    for (int x : xs) mean += x;
    mean /= double(xs.size());
    for (int x : xs) var += (x - mean) * (x - mean);
    var /= double(xs.size());
  };
  mean_var(leaf_depths, m.mean_leaf_depth, m.leaf_depth_var);
  mean_var(branching, m.mean_branching, m.branching_var);
  for (int b : branching) m.max_branching = std::max(m.max_branching, b);
  for (int d : leaf_depths) m.sackin += d;
  m.efficiency = double(m.max_depth + 1) / m.nodes;
  return m;
}

// Returns an empty string when every metric agrees, else a description.
inline std::string compare_metrics(const cotkit::MorphologyReport& r, const NaiveMetrics& m, double tol = 1e-9) {
  std::string bad;
  auto exact = [&](const char* k, long long a, long long b) {
    if (a != b) bad += std::string(k) + " " + std::to_string(a) + "!=" + std::to_string(b) + "; ";
  };
  auto close = [&](const char* k, double a, double b) {
    if (std::fabs(a - b) > tol) bad += std::string(k) + " " + std::to_string(a) + "!=" + std::to_string(b) + "; ";
  };
  exact("total_tree_nodes", r.total_tree_nodes, m.nodes);
  exact("max_depth", r.max_depth, m.max_depth);
  exact("max_width", r.max_width, m.max_width);
  exact("max_branching", r.max_branching, m.max_branching);
  exact("sackin", r.sackin, m.sackin);
  exact("gen_colless", r.gen_colless, m.colless);
  close("width_depth_ratio", r.width_depth_ratio, m.wdr);
  close("mean_leaf_depth", r.mean_leaf_depth, m.mean_leaf_depth);
  close("leaf_depth_variance", r.leaf_depth_variance, m.leaf_depth_var);
  close("mean_branching", r.mean_branching, m.mean_branching);
  close("branching_variance", r.branching_variance, m.branching_var);
  close("structural_efficiency", r.structural_efficiency, m.efficiency);
  return bad;
}

// Marker-laden pseudo reasoning text; exercises every boundary rule.
inline std::string random_trace_text(Rng& rng) {
  static const std::vector<std::string> openers{
      "However", "But", "Alternatively", "So", "Now", "however", "BUT", "Wait", "Therefore", "Let me check",
      "Hmm", "First", "Then", "Sonic", "Nowhere", "Butter"};
  static const std::vector<std::string> words{
      "the", "value", "is", "x", "equals", "7", "3.14", "we", "get", "e.g.", "Dr.", "sum", "\\frac{1}{2}",
      "area", "radius", "...", "i.e.", "so", "but", "now"};
  static const std::vector<std::string> enders{".", "?", "!", ".", ":", "", "...", ".)"};
  static const std::vector<std::string> gaps{" ", "  ", "\n", "\n\n", " \n", "\t", "\r\n", "\n \n"};
  static const std::vector<std::string> math{
      "$x = 1. So y$", "\\(a. But b\\)", "$$\n1. Now 2\n$$", "\\[ x. However \\]", "$5$", "$unclosed. So",
      "\\boxed{42}", "\\(", "$$"};
  std::string s;
  if (rng.coin(0.3)) s += "<think>\n";
  int sentences = rng.uniform(1, 14);
  for (int i = 0; i < sentences; ++i) {
    if (rng.coin(0.5)) s += rng.pick(openers) + (rng.coin(0.5) ? "," : "") + " ";
    int nw = rng.uniform(0, 8);
    for (int w = 0; w < nw; ++w) {
      s += rng.coin(0.1) ? rng.pick(math) : rng.pick(words);
      s += " ";
    }
    if (!s.empty() && s.back() == ' ' && rng.coin(0.7)) s.pop_back();
    s += rng.pick(enders);
    s += rng.pick(gaps);
    if (rng.coin(0.05)) s += "</think>\n";
  }
  if (rng.coin(0.3)) {
    // trim to a random prefix to get odd endings
    s.resize(static_cast<std::size_t>(rng.uniform(1, static_cast<int>(s.size()))));
  }
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) s += "x";
  return s;
}

}  // namespace testkit
