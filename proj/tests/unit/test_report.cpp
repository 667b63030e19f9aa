#include <doctest.h>

#include <set>

#include "cotkit/jsonl.hpp"
#include "cotkit/report.hpp"
#include "support.hpp"

using namespace cotkit;

namespace {

TraceMetrics metrics_for(const std::string& id, std::vector<std::vector<int>> kids, std::size_t tokens) {
  TraceMetrics m;
  m.trace_id = id;
  m.problem_id = "p" + id;
  m.source_nodes = static_cast<int>(kids.size());
  m.tokens = tokens;
  m.morphology = morphology(testkit::to_grouped(testkit::PlainTree{std::move(kids)}));
  SourceNodeSequence s{id, m.problem_id, {{1, "N1", "got 4"}, {2, "N2", "\\boxed{4}"}, {3, "N3", "ok"}}};
  m.boundary = answer_boundary(s, nullptr);
  m.node_types = node_type_distribution({{"N1", NodeType::Clarification, {}}, {"N2", NodeType::Conclusion, {}}});
  return m;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("file list") {
    CHECK(report_files(false).size() + 1 == report_files(true).size());
  }

  TEST_CASE("tables and json") {
    ReportInputs in;
    in.metrics = {metrics_for("a", {{1, 2}, {}, {}}, 30), metrics_for("b", {{1}, {}}, 50)};
    in.baseline = std::vector<TraceMetrics>{metrics_for("c", {{1, 2, 3}, {}, {}, {}}, 90)};
    in.results = {{"base", "q1", true, 100}, {"ecn", "q1", true, 60}};
    in.bootstrap.resamples = 200;
    auto dir = testkit::scratch_dir("report_tables");
    Json j = emit_report(in, dir.string());

    for (const auto& f : report_files(true)) CHECK(std::filesystem::exists(dir / f));
    auto read = [&](const char* f) { return read_text_file((dir / f).string()); };
    CHECK(first_line(read("table2_morphology.csv")) == "metric,key,mean,ci_lo,ci_hi,baseline_mean,delta");
    CHECK(read("table2_morphology.csv").find("Total tree nodes,total_tree_nodes,2.500000,") != std::string::npos);
    CHECK(first_line(read("table3_answer_boundary.csv")).rfind("group,traces,included,excluded", 0) == 0);
    CHECK(read("table3_answer_boundary.csv").find("run,2,2,0,1.000000,,2.000000,2.000000,2.000000,0") !=
          std::string::npos);
    CHECK(read("table1_summary.csv").find("ecn,1,1.000000") != std::string::npos);
    CHECK(read("token_lengths.csv").find("baseline,c,90,4") != std::string::npos);

    CHECK(j["traces"] == 2);
    CHECK(j["baseline_traces"] == 1);
    CHECK(j["bootstrap"]["seed"] == 1);
    auto row0 = j["morphology"]["metrics"][0];
    CHECK(row0["key"] == "total_tree_nodes");
    CHECK(row0["delta"].get<double>() == doctest::Approx(2.5 - 4));
    CHECK(j["summary"]["rows"][1]["token_delta_pct"].get<double>() == doctest::Approx(-40));
    CHECK(j == Json::parse(read("report.json")));
  }

  TEST_CASE("report bytes are reproducible") {
    ReportInputs in;
    for (int i = 0; i < 15; ++i) in.metrics.push_back(metrics_for("t" + std::to_string(i), {{1}, {}}, 10 + i * 7));
    in.bootstrap.resamples = 500;
    auto a = testkit::scratch_dir("report_a");
    auto b = testkit::scratch_dir("report_b");
    emit_report(in, a.string());
    in.workers = 3;
    emit_report(in, b.string());
    for (const auto& f : report_files(false)) {
      CHECK(read_text_file((a / f).string()) == read_text_file((b / f).string()));
    }
  }

  TEST_CASE("traces without trees still report boundaries") {
    ReportInputs in;
    TraceMetrics m = metrics_for("x", {{}}, 5);
    m.morphology.reset();
    in.metrics = {m};
    in.bootstrap.resamples = 50;
    auto dir = testkit::scratch_dir("report_notree");
    Json j = emit_report(in, dir.string());
    CHECK(j["morphology"]["traces"] == 0);
    CHECK(j["morphology"]["metrics"][0]["mean"].is_null());
  }
}
