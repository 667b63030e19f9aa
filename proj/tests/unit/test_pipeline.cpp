#include <doctest.h>

#include "cotkit/jsonl.hpp"
#include "cotkit/pipeline.hpp"
#include "support.hpp"

using namespace cotkit;
namespace fs = std::filesystem;

namespace {

fs::path corpus_copy(const std::string& name) {
  auto dir = testkit::scratch_dir(name);
  const fs::path src = testkit::source_dir() / "data" / "mini_corpus";
  for (const char* f : {"traces.jsonl", "problems.jsonl", "pipeline.json"}) fs::copy_file(src / f, dir / f);
  return dir;
}

std::map<std::string, std::string> statuses(const PipelineResult& r) {
  std::map<std::string, std::string> m;
  for (const auto& s : r.stages) m[s.name] = s.status;
  return m;
}

ErrorCode config_error(const Json& j) {
  try {
    PipelineConfig::from_json(j, ".");
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::service;  // not thrown
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config parsing") {
    auto c = PipelineConfig::from_json(Json{{"traces", "t.jsonl"}, {"workers", 3}, {"seed", 9},
                                            {"stages", {{"report", false}}}},
                                       "/base");
    CHECK(c.workers == 3);
    CHECK(c.bootstrap.seed == 9);
    CHECK(c.stages.at("report") == false);
    CHECK(c.resolve("t.jsonl") == "/base/t.jsonl");
    CHECK(c.resolve("/abs/x") == "/abs/x");
    CHECK(c.out("a.jsonl") == "/base/out/a.jsonl");

    CHECK(config_error(Json{{"tracez", "x"}}) == ErrorCode::config);
    CHECK(config_error(Json{{"workers", 0}}) == ErrorCode::config);
    CHECK(config_error(Json{{"workers", "many"}}) == ErrorCode::config);
    CHECK(config_error(Json{{"stages", {{"nope", true}}}}) == ErrorCode::config);
    CHECK(config_error(Json{{"stages", {{"ecn", 1}}}}) == ErrorCode::config);
    CHECK(config_error(Json{{"tokens", {{"scheme", "pluggable"}}}}) == ErrorCode::config);
    CHECK(config_error(Json{{"report", {{"extra", 1}}}}) == ErrorCode::config);
    CHECK(config_error(Json::array()) == ErrorCode::config);
  }

  TEST_CASE("config file errors") {
    auto dir = testkit::scratch_dir("pipeline_cfg");
    write_text_file((dir / "bad.json").string(), "{not json");
    CHECK_THROWS_AS(PipelineConfig::load((dir / "bad.json").string()), Error);
  }

  TEST_CASE("stage names") {
    const auto& n = pipeline_stage_names();
    CHECK(n.front() == "filter");
    CHECK(n.back() == "report");
    CHECK(n.size() == 10);
  }

  TEST_CASE("full run, resume and force") {
    auto dir = corpus_copy("pipeline_run");
    auto cfg = PipelineConfig::load((dir / "pipeline.json").string());
    cfg.bootstrap.resamples = 200;
    PipelineOptions opts;
    auto r1 = run_pipeline(cfg, opts);
    REQUIRE(r1.ok);
    for (const auto& [name, st] : statuses(r1)) CHECK_MESSAGE(st == "ran", name);
    CHECK(fs::exists(dir / "out" / "report" / "report.json"));
    CHECK(fs::exists(dir / "out" / "sft.summary.json"));
    std::string sft = read_text_file((dir / "out" / "sft.jsonl").string());

    auto r2 = run_pipeline(cfg, opts);
    for (const auto& [name, st] : statuses(r2)) CHECK_MESSAGE(st == "skipped", name);

    // Removing a middle output re-runs that stage and everything after it.
    fs::remove(dir / "out" / "judgments.jsonl");
    auto s3 = statuses(run_pipeline(cfg, opts));
    CHECK(s3["tree"] == "skipped");
    CHECK(s3["annotate-judgment"] == "ran");
    CHECK(s3["ecn"] == "ran");
    CHECK(s3["report"] == "ran");
    CHECK(read_text_file((dir / "out" / "sft.jsonl").string()) == sft);

    opts.force = true;
    opts.workers = 3;
    auto s4 = statuses(run_pipeline(cfg, opts));
    CHECK(s4["filter"] == "ran");
    CHECK(read_text_file((dir / "out" / "sft.jsonl").string()) == sft);
  }

  TEST_CASE("disabled stages and failures") {
    auto dir = corpus_copy("pipeline_fail");
    auto cfg = PipelineConfig::load((dir / "pipeline.json").string());
    cfg.stages["report"] = false;
    cfg.stages["metrics"] = false;
    auto r = run_pipeline(cfg, {});
    CHECK(r.ok);
    CHECK(statuses(r)["report"] == "disabled");
    CHECK_FALSE(fs::exists(dir / "out" / "metrics.jsonl"));

    write_text_file((dir / "problems.jsonl").string(), "{broken\n");
    PipelineOptions force;
    force.force = true;
    auto bad = run_pipeline(cfg, force);
    CHECK_FALSE(bad.ok);
    auto s = statuses(bad);
    CHECK(s["filter"] == "failed");
    CHECK(s["segment"] == "not_run");
    CHECK(s["report"] == "not_run");
    CHECK(bad.to_json()["status"] == "error");
    CHECK(bad.to_json()["stages"][0]["error"] == "PARSE");
  }

  TEST_CASE("batch annotator is rejected") {
    auto dir = corpus_copy("pipeline_batch");
    auto cfg = PipelineConfig::load((dir / "pipeline.json").string());
    cfg.service.mode = ServiceMode::batch_export;
    CHECK_THROWS_AS(run_pipeline(cfg, {}), Error);
  }
}
