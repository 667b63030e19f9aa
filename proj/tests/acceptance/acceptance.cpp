// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cotkit/annotator.hpp"
#include "cotkit/cli.hpp"
#include "cotkit/ecn.hpp"
#include "cotkit/jsonl.hpp"
#include "cotkit/metrics.hpp"
#include "cotkit/segmenter.hpp"
#include "cotkit/stages.hpp"
#include "cotkit/stats.hpp"
#include "support.hpp"

using namespace cotkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_budget(Outcome& o, Clock::time_point t0, double budget) {
  double s = seconds_since(t0);
  if (s >= budget) o.fail(fmt::format("took {:.2f}s, budget {:.0f}s", s, budget));
}

// 1 ------------------------------------------------------------------------
Outcome morphology_oracle() {
  Outcome o;
  auto t0 = Clock::now();
  testkit::Rng rng(20240601);
  const std::vector<testkit::Shape> shapes{testkit::Shape::random_recursive, testkit::Shape::path,
                                           testkit::Shape::star,             testkit::Shape::caterpillar,
                                           testkit::Shape::broom,            testkit::Shape::binary};
  for (int i = 0; i < 1000; ++i) {
    int n = rng.uniform(1, 40);
    auto plain = testkit::make_tree(rng, n, shapes[i % shapes.size()]);
    auto report = morphology(testkit::to_grouped(plain));
    std::string bad = testkit::compare_metrics(report, testkit::naive_metrics(plain));
    if (!bad.empty()) {
      o.fail(fmt::format("tree {} (n={}): {}", i, n, bad));
      break;
    }
  }
  check_budget(o, t0, 10);
  if (o.ok) o.detail = fmt::format("1000 trees in {:.2f}s", seconds_since(t0));
  return o;
}

// 2 ------------------------------------------------------------------------
Outcome closed_forms() {
  Outcome o;
  auto tree_from = [](std::vector<std::vector<int>> kids) {
    testkit::PlainTree t;
    t.kids = std::move(kids);
    return morphology(testkit::to_grouped(t));
  };
  auto single = tree_from({{}});
  if (single.width_depth_ratio != 0.0 || single.structural_efficiency != 1.0 || single.sackin != 0)
    o.fail("single node");
  for (int n = 2; n <= 12; ++n) {
    std::vector<std::vector<int>> path(n), star(n);
    for (int v = 1; v < n; ++v) {
      path[v - 1].push_back(v);
      star[0].push_back(v);
    }
    auto p = tree_from(path);
    if (p.structural_efficiency != 1.0 || p.gen_colless != 0) o.fail(fmt::format("path n={}", n));
    auto s = tree_from(star);
    if (s.sackin != n - 1 || s.gen_colless != 0) o.fail(fmt::format("star n={}", n));
  }
  // root -> {leaf, x}, x -> {leaf, leaf}
  auto cat = tree_from({{1, 2}, {}, {3, 4}, {}, {}});
  if (cat.sackin != 5 || cat.gen_colless != 1)
    o.fail(fmt::format("caterpillar-3: sackin {} colless {}", cat.sackin, cat.gen_colless));
  if (o.ok) o.detail = "single node, paths and stars n=2..12, caterpillar";
  return o;
}

// 3 ------------------------------------------------------------------------
Outcome segmentation_round_trip() {
  Outcome o;
  auto t0 = Clock::now();
  testkit::Rng rng(77);
  SegmenterConfig blank;
  blank.paragraph_break = ParagraphBreak::blank_line;
  SegmenterConfig sensitive;
  sensitive.case_insensitive = false;
  sensitive.min_node_chars = 12;
  const SegmenterConfig* configs[] = {nullptr, &blank, &sensitive};
  const SegmenterConfig defaults;
  for (int i = 0; i < 10000 && o.ok; ++i) {
    std::string text = testkit::random_trace_text(rng);
    const SegmenterConfig& cfg = configs[i % 3] ? *configs[i % 3] : defaults;
    auto seq = segment(text, cfg);
    if (reassemble(seq) != text) o.fail(fmt::format("text {} does not round-trip", i));
    for (std::size_t k = 0; k < seq.nodes.size() && o.ok; ++k) {
      if (seq.nodes[k].index != int(k) + 1 || seq.nodes[k].label != node_label(int(k) + 1))
        o.fail(fmt::format("text {}: bad numbering", i));
      if (seq.nodes[k].text.empty()) o.fail(fmt::format("text {}: empty node", i));
    }
  }
  std::string fixture = read_text_file((testkit::data_dir() / "annotation_examples" / "fixture_trace.txt").string());
  auto seq = segment(fixture);
  if (reassemble(seq) != fixture) o.fail("fixture does not round-trip");
  if (seq.nodes.size() != 1 || seq.nodes[0].label != "N1")
    o.fail(fmt::format("fixture gave {} nodes", seq.nodes.size()));
  check_budget(o, t0, 10);
  if (o.ok) o.detail = fmt::format("10000 texts + fixture in {:.2f}s", seconds_since(t0));
  return o;
}

// Synthetic traces with a known earliest correct conclusion -----------------
struct PlantedTrace {
  SourceNodeSequence seq;
  std::vector<TaxonomyLabel> labels;
  std::vector<ConclusionJudgment> judgments;
  std::string gold;
  std::optional<int> planted;
};

PlantedTrace plant(testkit::Rng& rng, int id, bool with_correct) {
  PlantedTrace t;
  t.seq.trace_id = fmt::format("s{:03d}", id);
  t.seq.problem_id = fmt::format("q{:03d}", id);
  int gold = rng.uniform(2, 500);
  t.gold = std::to_string(gold);
  int m = rng.uniform(2, 24);
  if (with_correct) t.planted = rng.uniform(1, m);

  for (int i = 1; i <= m; ++i) {
    SourceNode node{i, node_label(i), ""};
    TaxonomyLabel label{node.label, NodeType::Clarification, std::nullopt};
    auto conclusion = [&](bool correct, ConclusionKind kind, std::string text) {
      label.primary = NodeType::Conclusion;
      node.text = std::move(text);
      t.judgments.push_back({node.label, correct, kind});
    };
    bool before = !t.planted || i < *t.planted;
    if (t.planted && i == *t.planted) {
      if (rng.coin(0.8)) {
        conclusion(rng.coin(0.5), ConclusionKind::AnsweringConclusion,
                   fmt::format("Therefore the answer is \\boxed{{{}}}.\n", gold));
      } else {
        // implicit: no extractable value, correctness from the judgment
        conclusion(true, ConclusionKind::AnsweringConclusion, "That settles the question.\n");
      }
    } else if (before) {
      switch (rng.uniform(0, 4)) {
        case 0:
          conclusion(false, ConclusionKind::AnsweringConclusion,
                     fmt::format("So the answer is \\boxed{{{}}}.\n", gold + rng.uniform(1, 9)));
          break;
        case 1:
          conclusion(false, ConclusionKind::IntermediateConclusion, "Hence the first factor is positive.\n");
          break;
        case 2:
          // correct value but not labeled Conclusion
          label.primary = NodeType::Verification;
          node.text = fmt::format("Let me check \\boxed{{{}}} again.\n", gold);
          break;
        default:
          label.primary = rng.coin() ? NodeType::Exploration : NodeType::Backtracking;
          node.text = fmt::format("Consider {} instead.\n", gold + 1000);
      }
    } else {
      if (rng.coin(0.4)) {
        bool right = rng.coin();
        conclusion(right, ConclusionKind::AnsweringConclusion,
                   fmt::format("Final Answer: \\boxed{{{}}}\n", right ? gold : gold + 1));
      } else {
        label.primary = NodeType::Verification;
        node.text = "Let me verify the arithmetic once more.\n";
      }
    }
    t.seq.nodes.push_back(node);
    t.labels.push_back(label);
  }
  return t;
}

// 4 ------------------------------------------------------------------------
Outcome ecn_invariants() {
  Outcome o;
  testkit::Rng rng(4242);
  std::vector<PlantedTrace> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(plant(rng, i, i % 5 != 0));

  std::set<std::string> expect_excluded;
  for (const auto& t : corpus) {
    auto r = find_ecn(t.seq, t.labels, t.judgments, normalize_answer(t.gold));
    if (r.ecn_index != t.planted) {
      o.fail(fmt::format("{}: ecn {} planted {}", t.seq.trace_id, r.ecn_index.value_or(0), t.planted.value_or(0)));
      continue;
    }
    if (!t.planted) {
      expect_excluded.insert(t.seq.trace_id);
      continue;
    }
    int k = *t.planted;
    auto p = prune(t.seq, k);
    if (p.nodes.size() != std::size_t(k) ||
        !std::equal(p.nodes.begin(), p.nodes.end(), t.seq.nodes.begin()))
      o.fail(t.seq.trace_id + ": prune is not the exact prefix");
    if (!(prune(p, k) == p)) o.fail(t.seq.trace_id + ": prune is not idempotent");
    std::string whole = reassemble(t.seq);
    std::string head = reassemble(p);
    if (whole.compare(0, head.size(), head) != 0) o.fail(t.seq.trace_id + ": pruned text is not a prefix");
  }

  // The same corpus through the file stage: every trace lands exactly once.
  auto dir = testkit::scratch_dir("acceptance_ecn");
  auto path = [&](const char* f) { return (dir / f).string(); };
  {
    JsonlWriter nodes(path("nodes.jsonl")), labels(path("labels.jsonl")), judgments(path("judgments.jsonl")),
        problems(path("problems.jsonl"));
    for (const auto& t : corpus) {
      nodes.write(to_json(t.seq));
      labels.write(to_json(LabelSet{t.seq.trace_id, t.labels, std::nullopt}));
      judgments.write(to_json(JudgmentSet{t.seq.trace_id, t.judgments, std::nullopt}));
      problems.write(to_json(ProblemRecord{t.seq.problem_id, "synthetic", t.gold, {}}));
    }
    nodes.commit();
    labels.commit();
    judgments.commit();
    problems.commit();
  }
  StageContext ctx;
  ecn_stage(ctx, {path("nodes.jsonl"), path("labels.jsonl"), path("judgments.jsonl"), path("problems.jsonl"),
                  path("pruned.jsonl"), path("excluded.jsonl")});
  std::multiset<std::string> seen;
  std::set<std::string> excluded;
  JsonlReader pr(path("pruned.jsonl"));
  while (auto r = pr.next()) seen.insert((*r)["trace_id"].get<std::string>());
  JsonlReader ex(path("excluded.jsonl"));
  while (auto r = ex.next()) {
    std::string id = (*r)["trace_id"].get<std::string>();
    seen.insert(id);
    excluded.insert(id);
    if ((*r)["reason"] != "NO_CORRECT_CONCLUSION") o.fail(id + ": unexpected quarantine reason");
  }
  if (seen.size() != corpus.size()) o.fail(fmt::format("{} of {} traces accounted for", seen.size(), corpus.size()));
  for (const auto& t : corpus) {
    if (seen.count(t.seq.trace_id) != 1) o.fail(t.seq.trace_id + " dropped or duplicated");
  }
  if (excluded != expect_excluded) o.fail("quarantine set differs from the planted no-answer traces");
  if (o.ok) o.detail = fmt::format("200 traces, {} quarantined", excluded.size());
  return o;
}

// 5 ------------------------------------------------------------------------
Outcome answer_boundary_consistency() {
  Outcome o;
  testkit::Rng rng(555);
  int carried = 0;
  for (int i = 0; i < 500; ++i) {
    int answer = rng.uniform(1, 9) * 10 + rng.uniform(1, 9);
    int m = rng.uniform(1, 20);
    int k = rng.uniform(1, m);
    bool boxed_at_k = rng.coin(0.6);
    SourceNodeSequence seq;
    seq.trace_id = fmt::format("b{}", i);
    for (int j = 1; j <= m; ++j) {
      std::string text;
      if (j < k) {
        // decoys: the answer appears only inside longer numbers
        text = fmt::format("Consider {}{} and {} first.\n", answer, rng.uniform(0, 9), answer + 100);
      } else if (j == k) {
        text = boxed_at_k ? fmt::format("Thus \\boxed{{{}}}.\n", answer) : fmt::format("We get {} here.\n", answer);
      } else if (j == m) {
        text = fmt::format("Final Answer: \\boxed{{{}}}", answer);
      } else {
        text = rng.coin() ? "Let me double check.\n" : fmt::format("Again {} holds.\n", answer);
      }
      seq.nodes.push_back({j, node_label(j), text});
    }
    if (k == m) seq.nodes.back().text = fmt::format("Final Answer: \\boxed{{{}}}", answer);
    bool k_carries = boxed_at_k || k == m;

    auto b = answer_boundary(seq, nullptr);
    if (b.excluded || !b.earliest_index || !b.post_answer_gap) {
      o.fail(seq.trace_id + ": no boundary");
      continue;
    }
    if (*b.earliest_index != k) o.fail(fmt::format("{}: k* {} expected {}", seq.trace_id, *b.earliest_index, k));
    if (*b.post_answer_gap != m - *b.earliest_index) o.fail(seq.trace_id + ": gap != m - k*");
    if (k_carries) {
      ++carried;
      auto after = answer_boundary(prune(seq, *b.earliest_index), nullptr);
      if (!after.post_answer_gap || *after.post_answer_gap != 0) o.fail(seq.trace_id + ": pruned gap is not 0");
    }
  }
  if (o.ok) o.detail = fmt::format("500 traces, {} re-checked after pruning", carried);
  return o;
}

// 6 ------------------------------------------------------------------------
Outcome summary_arithmetic() {
  Outcome o;
  auto row = summary_from_means("SD-ECN", 0.868, 2118, 0.878, 3678);
  if (std::fabs(row.accuracy_delta - (-0.010)) > 1e-12) o.fail(fmt::format("accuracy delta {}", row.accuracy_delta));
  if (fmt::format("{:.1f}", row.token_delta_pct) != "-42.4") o.fail(fmt::format("token delta {}", row.token_delta_pct));

  // The same numbers from question-level results.
  std::vector<QuestionResult> results;
  for (int q = 0; q < 500; ++q) {
    std::string id = fmt::format("q{}", q);
    results.push_back({"base", id, q < 439, q < 250 ? 3600.0 : 3756.0});
    results.push_back({"SD-ECN", id, q < 434, q < 250 ? 2000.0 : 2236.0});
  }
  auto rows = corpus_summary(results, "base");
  if (rows.size() != 2 || fmt::format("{:.3f}", rows[1].accuracy_delta) != "-0.010" ||
      fmt::format("{:.1f}", rows[1].token_delta_pct) != "-42.4")
    o.fail("question-level summary disagrees");

  // Morphology means and printed deltas (one-decimal rounding upstream).
  const std::array<double, 12> ecn{11.11, 5.62, 3.47, 0.93, 4.29, 4.23, 1.69, 3.23, 1.81, 0.65, 16.73, 5.11};
  const std::array<double, 12> base{15.20, 6.28, 5.23, 1.15, 4.60, 2.59, 1.90, 4.61, 3.43, 0.53, 30.91, 11.29};
  const std::array<double, 12> printed{-4.10, -0.66, -1.76, -0.22, -0.31, 1.65, -0.21, -1.38, -1.62, 0.13, -14.17, -6.17};
  auto deltas = delta_from_means(ecn, base);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (std::fabs(deltas[i].delta - printed[i]) > 0.01 + 1e-9)
      o.fail(fmt::format("{}: {} vs {}", deltas[i].title, deltas[i].delta, printed[i]));
    if (deltas[i].title != std::string(kMorphologyMetrics[i].title)) o.fail("row order");
  }
  if (o.ok) o.detail = fmt::format("-0.010, {:.1f}%, {:.2f}, {:.2f}", row.token_delta_pct, deltas[0].delta, deltas[10].delta);
  return o;
}

// 7 ------------------------------------------------------------------------
Outcome bootstrap_checks() {
  Outcome o;
  auto t0 = Clock::now();
  BootstrapConfig cfg;
  for (double v : {0.0, 1.0, 0.3, 2118.5}) {
    auto ci = bootstrap_ci(std::vector<double>(37, v), cfg);
    if (ci.lo != v || ci.hi != v) o.fail(fmt::format("constant {} gave [{}, {}]", v, ci.lo, ci.hi));
  }

  testkit::Rng rng(9);
  std::vector<double> data(300);
  for (auto& x : data) x = rng.real() * 100;
  cfg.resamples = 4000;
  cfg.seed = 12345;
  auto a = bootstrap_means(data, cfg, 1);
  auto b = bootstrap_means(data, cfg, 1);
  auto c = bootstrap_means(data, cfg, 4);
  if (a.size() != b.size() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0)
    o.fail("two runs differ");
  if (a.size() != c.size() || std::memcmp(a.data(), c.data(), a.size() * sizeof(double)) != 0)
    o.fail("worker count changes the resamples");

  BootstrapConfig cov;
  cov.resamples = 2000;
  cov.level = 0.95;
  std::mt19937_64 gen(2025);
  std::bernoulli_distribution coin(0.9);
  int covered = 0;
  const int datasets = 500;
  for (int d = 0; d < datasets; ++d) {
    std::vector<double> xs(200);
    for (auto& x : xs) x = coin(gen) ? 1.0 : 0.0;
    cov.seed = 1000 + static_cast<std::uint64_t>(d);
    auto ci = bootstrap_ci(xs, cov);
    if (ci.lo <= 0.9 && 0.9 <= ci.hi) ++covered;
  }
  double coverage = double(covered) / datasets;
  if (coverage < 0.92 || coverage > 0.98) o.fail(fmt::format("coverage {:.3f}", coverage));
  check_budget(o, t0, 60);
  if (o.ok) o.detail = fmt::format("coverage {:.3f} in {:.2f}s", coverage, seconds_since(t0));
  return o;
}

// 8 ------------------------------------------------------------------------
Outcome golden_pipeline() {
  Outcome o;
  auto t0 = Clock::now();
  const fs::path corpus = testkit::source_dir() / "data" / "mini_corpus";
  auto run = [&](const std::string& name, int workers) {
    auto dir = testkit::scratch_dir("acceptance_" + name);
    for (const char* f : {"traces.jsonl", "problems.jsonl", "pipeline.json"}) fs::copy_file(corpus / f, dir / f);
    std::ostringstream out, err;
    int rc = run_cli({"cotkit", "pipeline", "--config", (dir / "pipeline.json").string(), "--workers",
                      std::to_string(workers), "--quiet"},
                     out, err);
    if (rc != 0) o.fail(fmt::format("run {} exited {}: {}", name, rc, err.str()));
    return dir / "out";
  };
  auto a = run("w1a", 1);
  auto b = run("w1b", 1);
  auto c = run("w4", 4);
  if (!o.ok) return o;

  const std::vector<std::string> files{
      "nodes.jsonl", "labels.jsonl", "trees.jsonl", "pruned.jsonl", "excluded.jsonl", "sft.jsonl",
      "sft.summary.json", "metrics.jsonl", "report/report.json", "report/table2_morphology.csv",
      "report/table3_answer_boundary.csv", "report/node_types.csv", "report/token_histogram.csv",
      "report/token_lengths.csv"};
  for (const auto& f : files) {
    std::string x = read_text_file((a / f).string());
    if (x.empty()) o.fail(f + " is empty");
    if (x != read_text_file((b / f).string())) o.fail(f + " differs between two runs");
    if (x != read_text_file((c / f).string())) o.fail(f + " differs between 1 and 4 workers");
  }
  if (read_text_file((a / "sft.jsonl").string()) !=
      read_text_file((testkit::data_dir() / "golden" / "sft.jsonl").string()))
    o.fail("sft.jsonl differs from the golden file");

  Json got = Json::parse(read_text_file((a / "sft.summary.json").string()));
  Json want = Json::parse(read_text_file((testkit::data_dir() / "golden" / "sft_summary.oracle.json").string()));
  if (got["count"] != want["count"]) o.fail("sft count differs from the oracle");
  for (const char* k : {"mean_original_tokens", "mean_pruned_tokens", "mean_reduction_pct"}) {
    if (std::fabs(got[k].get<double>() - want[k].get<double>()) > 1e-9)
      o.fail(fmt::format("{}: {} vs oracle {}", k, got[k].get<double>(), want[k].get<double>()));
  }
  std::set<std::string> ids;
  JsonlReader sft((a / "sft.jsonl").string());
  while (auto r = sft.next()) ids.insert((*r)["trace_id"].get<std::string>());
  std::set<std::string> want_ids;
  for (const auto& id : want["selected"]) want_ids.insert(id.get<std::string>());
  if (ids != want_ids) o.fail("selected traces differ from the oracle");
  check_budget(o, t0, 30);
  if (o.ok)
    o.detail = fmt::format("3 runs in {:.2f}s, mean reduction {:.3f}%", seconds_since(t0),
                           got["mean_reduction_pct"].get<double>());
  return o;
}

// 9 ------------------------------------------------------------------------
Outcome annotation_parsing() {
  Outcome o;
  const fs::path dir = testkit::data_dir() / "annotation_examples";
  auto labels = parse_taxonomy_labels(read_text_file((dir / "taxonomy_response.jsonl").string()), 2);
  const std::vector<TaxonomyLabel> want_labels{{"N1", NodeType::Verification, std::nullopt},
                                               {"N2", NodeType::Verification, NodeType::Exploration}};
  if (labels != want_labels) o.fail("taxonomy lines");

  auto tree = parse_tree(read_text_file((dir / "tree_response.json").string()));
  struct Want {
    const char* id;
    std::vector<int> labels;
    std::optional<std::size_t> parent;
    int depth;
    std::vector<std::size_t> children;
  };
  const std::vector<Want> want_tree{{"1", {1}, std::nullopt, 0, {1}},
                                    {"1.1", {2}, 0, 1, {2, 3}},
                                    {"1.1.1", {3}, 1, 2, {}},
                                    {"1.1.2", {4}, 1, 2, {}}};
  if (tree.node_count() != want_tree.size()) {
    o.fail("tree size");
  } else {
    for (std::size_t i = 0; i < want_tree.size(); ++i) {
      const auto& n = tree.node(i);
      const auto& w = want_tree[i];
      if (n.id != w.id || n.labels != w.labels || n.parent != w.parent || n.depth != w.depth ||
          n.children != w.children)
        o.fail(fmt::format("tree node {}", w.id));
    }
  }

  auto judgments = parse_conclusion_judgments(read_text_file((dir / "judgment_response.jsonl").string()));
  const std::vector<ConclusionJudgment> want_judgments{
      {"N5", false, ConclusionKind::IntermediateConclusion},
      {"N10", true, ConclusionKind::AnsweringConclusion},
      {"N12", true, ConclusionKind::AnsweringConclusion}};
  if (judgments != want_judgments) o.fail("judgment lines");

  try {
    parse_tree(read_text_file((dir / "tree_sequential_violation.json").string()));
    o.fail("N5-before-N4 tree was accepted");
  } catch (const TreeValidationError& e) {
    if (e.code() != ErrorCode::sequential || !e.report().has("SEQUENTIAL"))
      o.fail(fmt::format("wrong diagnostic: {}", e.what()));
  }
  if (o.ok) o.detail = "taxonomy, tree, judgments, SEQUENTIAL rejection";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"morphology oracle", morphology_oracle},
      {"closed-form shapes", closed_forms},
      {"segmentation round trip", segmentation_round_trip},
      {"ECN invariants", ecn_invariants},
      {"answer-boundary consistency", answer_boundary_consistency},
      {"summary arithmetic", summary_arithmetic},
      {"bootstrap", bootstrap_checks},
      {"golden pipeline run", golden_pipeline},
      {"annotation-response parsing", annotation_parsing},
  };
  int failed = 0;
  int i = 0;
  for (const auto& c : criteria) {
    ++i;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::cout << fmt::format("{} {}. {}: {}", o.ok ? "PASS" : "FAIL", i, c.name, o.detail) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
