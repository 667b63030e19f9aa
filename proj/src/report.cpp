#include "cotkit/report.hpp"

#include <algorithm>
#include <filesystem>

#include <fmt/format.h>

#include "cotkit/jsonl.hpp"

namespace cotkit {

namespace {

std::string num(double v) { return fmt::format("{:.6f}", v); }

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// Quotes a CSV field when needed.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

struct BoundaryStats {
  std::size_t traces = 0;
  std::size_t included = 0;
  std::size_t excluded = 0;
  std::size_t multi_answer = 0;
  std::optional<double> mean_earliest_index;
  std::optional<double> mean_earliest_depth;
  std::optional<double> mean_post_answer_gap;
  std::vector<double> gaps;

  Json to_json() const {
    return Json{{"traces", traces},
                {"included", included},
                {"excluded", excluded},
                {"multi_answer", multi_answer},
                {"mean_earliest_index", opt_json(mean_earliest_index)},
                {"mean_earliest_depth", opt_json(mean_earliest_depth)},
                {"mean_post_answer_gap", opt_json(mean_post_answer_gap)}};
  }
};

BoundaryStats boundary_stats(const std::vector<TraceMetrics>& ms) {
  BoundaryStats s;
  std::vector<double> index, depth;
  s.traces = ms.size();
  for (const auto& m : ms) {
    const auto& b = m.boundary;
    if (b.excluded || !b.earliest_index || !b.post_answer_gap) {
      ++s.excluded;
      continue;
    }
    ++s.included;
    index.push_back(*b.earliest_index);
    s.gaps.push_back(*b.post_answer_gap);
    if (b.earliest_depth) depth.push_back(*b.earliest_depth);
    for (const auto& w : b.warnings) {
      if (w.rfind("MULTI_ANSWER", 0) == 0) {
        ++s.multi_answer;
        break;
      }
    }
  }
  s.mean_earliest_index = mean_of(index);
  s.mean_earliest_depth = mean_of(depth);
  s.mean_post_answer_gap = mean_of(s.gaps);
  return s;
}

NodeTypeDistribution pooled_types(const std::vector<TraceMetrics>& ms) {
  NodeTypeDistribution d;
  for (const auto& m : ms) {
    if (!m.node_types) continue;
    for (std::size_t i = 0; i < d.count.size(); ++i) d.count[i] += m.node_types->count[i];
    d.total += m.node_types->total;
  }
  for (std::size_t i = 0; i < d.count.size(); ++i) {
    d.fraction[i] = d.total == 0 ? 0.0 : static_cast<double>(d.count[i]) / d.total;
  }
  return d;
}

std::vector<MorphologyReport> reports_of(const std::vector<TraceMetrics>& ms) {
  std::vector<MorphologyReport> out;
  for (const auto& m : ms) {
    if (m.morphology) out.push_back(*m.morphology);
  }
  return out;
}

std::vector<double> tokens_of(const std::vector<TraceMetrics>& ms) {
  std::vector<double> out;
  for (const auto& m : ms) out.push_back(static_cast<double>(m.tokens));
  return out;
}

}  // namespace

std::vector<std::string> report_files(bool with_results) {
  std::vector<std::string> files{"report.json"};
  if (with_results) files.push_back("table1_summary.csv");
  for (const char* f : {"table2_morphology.csv", "table3_answer_boundary.csv", "node_types.csv",
                        "token_histogram.csv", "token_lengths.csv"}) {
    files.emplace_back(f);
  }
  return files;
}

Json emit_report(const ReportInputs& in, const std::string& out_dir) {
  in.bootstrap.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot create report directory '{}': {}", out_dir, ec.message()));
  auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
  const bool has_base = in.baseline.has_value();
  const std::vector<TraceMetrics> empty;
  const auto& base = has_base ? *in.baseline : empty;

  Json report;
  report["bootstrap"] = in.bootstrap.to_json();
  report["token_scheme"] = to_string(in.token_scheme);
  report["traces"] = in.metrics.size();
  report["baseline_traces"] = has_base ? Json(base.size()) : Json(nullptr);

  // Accuracy and token summary.
  if (!in.results.empty()) {
    auto rows = corpus_summary(in.results, in.base_method, in.bootstrap);
    std::string csv =
        "method,questions,accuracy,accuracy_ci_lo,accuracy_ci_hi,accuracy_delta,mean_tokens,tokens_ci_lo,"
        "tokens_ci_hi,token_delta_pct\n";
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back(r.to_json());
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", field(r.method), r.questions, num(r.accuracy),
                         r.accuracy_ci ? num(r.accuracy_ci->lo) : "", r.accuracy_ci ? num(r.accuracy_ci->hi) : "",
                         num(r.accuracy_delta), num(r.mean_tokens), r.tokens_ci ? num(r.tokens_ci->lo) : "",
                         r.tokens_ci ? num(r.tokens_ci->hi) : "", num(r.token_delta_pct));
    }
    report["summary"] = Json{{"base_method", in.base_method}, {"rows", arr}};
    write_text_file(path("table1_summary.csv"), csv);
  }

  // Morphology.
  {
    auto run = reports_of(in.metrics);
    auto ref = reports_of(base);
    std::array<double, 12> run_means = morphology_means(run);
    std::array<double, 12> ref_means = morphology_means(ref);
    std::vector<std::vector<double>> columns(12);
    for (const auto& r : run) {
      auto v = metric_values(r);
      for (std::size_t i = 0; i < v.size(); ++i) columns[i].push_back(v[i]);
    }
    std::string csv = "metric,key,mean,ci_lo,ci_hi,baseline_mean,delta\n";
    Json arr = Json::array();
    for (std::size_t i = 0; i < kMorphologyMetrics.size(); ++i) {
      const auto& info = kMorphologyMetrics[i];
      std::optional<double> mean, lo, hi, bmean, delta;
      if (!run.empty()) {
        mean = run_means[i];
        Interval ci = bootstrap_ci(columns[i], in.bootstrap, in.workers);
        lo = ci.lo;
        hi = ci.hi;
      }
      if (has_base && !ref.empty()) {
        bmean = ref_means[i];
        if (mean) delta = *mean - *bmean;
      }
      Json row{{"metric", info.title}, {"key", info.key}, {"mean", opt_json(mean)}};
      row["ci"] = lo ? Json{*lo, *hi} : Json(nullptr);
      row["baseline_mean"] = opt_json(bmean);
      row["delta"] = opt_json(delta);
      arr.push_back(std::move(row));
      csv += fmt::format("{},{},{},{},{},{},{}\n", field(info.title), info.key, num(mean), num(lo), num(hi),
                         num(bmean), num(delta));
    }
    report["morphology"] = Json{{"traces", run.size()},
                                {"baseline_traces", has_base ? Json(ref.size()) : Json(nullptr)},
                                {"metrics", arr}};
    write_text_file(path("table2_morphology.csv"), csv);
  }

  // Answer boundary.
  {
    std::string csv =
        "group,traces,included,excluded,mean_earliest_index,mean_earliest_depth,mean_post_answer_gap,"
        "gap_ci_lo,gap_ci_hi,multi_answer\n";
    Json obj = Json::object();
    auto add = [&](const char* name, const std::vector<TraceMetrics>& ms) {
      BoundaryStats s = boundary_stats(ms);
      std::optional<double> lo, hi;
      if (!s.gaps.empty()) {
        Interval ci = bootstrap_ci(s.gaps, in.bootstrap, in.workers);
        lo = ci.lo;
        hi = ci.hi;
      }
      Json j = s.to_json();
      j["post_answer_gap_ci"] = lo ? Json{*lo, *hi} : Json(nullptr);
      obj[name] = std::move(j);
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", name, s.traces, s.included, s.excluded,
                         num(s.mean_earliest_index), num(s.mean_earliest_depth), num(s.mean_post_answer_gap),
                         num(lo), num(hi), s.multi_answer);
    };
    add("run", in.metrics);
    if (has_base) add("baseline", base);
    report["answer_boundary"] = std::move(obj);
    write_text_file(path("table3_answer_boundary.csv"), csv);
  }

  // Node-type distribution.
  {
    NodeTypeDistribution run = pooled_types(in.metrics);
    NodeTypeDistribution ref = pooled_types(base);
    std::string csv = "type,count,fraction,baseline_count,baseline_fraction\n";
    for (std::size_t i = 0; i < kAllNodeTypes.size(); ++i) {
      csv += fmt::format("{},{},{},{},{}\n", to_string(kAllNodeTypes[i]), run.count[i], num(run.fraction[i]),
                         has_base ? std::to_string(ref.count[i]) : "", has_base ? num(ref.fraction[i]) : "");
    }
    report["node_types"] = Json{{"run", to_json(run)}, {"baseline", has_base ? to_json(ref) : Json(nullptr)}};
    write_text_file(path("node_types.csv"), csv);
  }

  // Length distribution.
  {
    std::vector<double> run = tokens_of(in.metrics);
    std::vector<double> ref = tokens_of(base);
    double max_tokens = 0;
    for (double t : run) max_tokens = std::max(max_tokens, t);
    for (double t : ref) max_tokens = std::max(max_tokens, t);
    std::size_t bins = std::max<std::size_t>(1, in.histogram_bins);
    auto top = static_cast<std::size_t>(max_tokens) + 1;
    std::size_t width = std::max<std::size_t>(1, (top + bins - 1) / bins);
    std::size_t nbins = (top + width - 1) / width;
    std::vector<std::size_t> hist_run(nbins, 0), hist_ref(nbins, 0);
    for (double t : run) ++hist_run[static_cast<std::size_t>(t) / width];
    for (double t : ref) ++hist_ref[static_cast<std::size_t>(t) / width];
    std::string csv = "bin_lo,bin_hi,count,baseline_count\n";
    for (std::size_t b = 0; b < nbins; ++b) {
      csv += fmt::format("{},{},{},{}\n", b * width, (b + 1) * width, hist_run[b],
                         has_base ? std::to_string(hist_ref[b]) : "");
    }
    write_text_file(path("token_histogram.csv"), csv);

    std::string lengths = "group,trace_id,tokens,source_nodes\n";
    for (const auto& m : in.metrics) lengths += fmt::format("run,{},{},{}\n", field(m.trace_id), m.tokens, m.source_nodes);
    for (const auto& m : base) lengths += fmt::format("baseline,{},{},{}\n", field(m.trace_id), m.tokens, m.source_nodes);
    write_text_file(path("token_lengths.csv"), lengths);

    std::optional<double> lo, hi;
    if (!run.empty()) {
      Interval ci = bootstrap_ci(run, in.bootstrap, in.workers);
      lo = ci.lo;
      hi = ci.hi;
    }
    report["tokens"] = Json{{"mean", opt_json(mean_of(run))},
                            {"ci", lo ? Json{*lo, *hi} : Json(nullptr)},
                            {"baseline_mean", opt_json(mean_of(ref))},
                            {"histogram_bin_width", width}};
  }

  write_text_file(path("report.json"), report.dump(2) + "\n");
  return report;
}

}  // namespace cotkit
