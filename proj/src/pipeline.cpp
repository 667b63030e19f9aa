#include "cotkit/pipeline.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "cotkit/jsonl.hpp"

namespace cotkit {

namespace fs = std::filesystem;

namespace {

void check_keys(const Json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::config, fmt::format("'{}' must be a JSON object", where));
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto& [k, _] : j.items()) {
    if (!ok.count(k)) throw Error(ErrorCode::config, fmt::format("unknown key '{}' in {}", k, where));
  }
}

template <typename T>
T get(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::config, fmt::format("bad value for '{}'", key));
  }
}

bool all_exist(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    if (!fs::exists(p)) return false;
  }
  return true;
}

void require_inputs(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    if (!p.empty() && !fs::exists(p)) throw Error(ErrorCode::io, fmt::format("missing input '{}'", p));
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const Json& j, fs::path base_dir) {
  check_keys(j, "pipeline config",
             {"traces", "problems", "output_dir", "workers", "seed", "stages", "segmenter", "annotator", "selector",
              "bootstrap", "tokens", "report"});
  PipelineConfig c;
  c.base_dir = std::move(base_dir);
  c.traces = get<std::string>(j, "traces", c.traces);
  c.problems = get<std::string>(j, "problems", c.problems);
  c.output_dir = get<std::string>(j, "output_dir", c.output_dir);
  int workers = get<int>(j, "workers", 1);
  if (workers < 1) throw Error(ErrorCode::config, "workers must be >= 1");
  c.workers = static_cast<std::size_t>(workers);

  if (j.contains("stages")) {
    const auto& names = pipeline_stage_names();
    for (auto& [k, v] : j["stages"].items()) {
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        throw Error(ErrorCode::config, fmt::format("unknown stage '{}'", k));
      }
      if (!v.is_boolean()) throw Error(ErrorCode::config, fmt::format("stage toggle '{}' must be a boolean", k));
      c.stages[k] = v.get<bool>();
    }
  }
  if (j.contains("segmenter")) c.segmenter = SegmenterConfig::from_json(j["segmenter"]);
  if (j.contains("annotator")) {
    Json a = j["annotator"];
    check_keys(a, "annotator",
               {"mode", "endpoint", "auth_env_var", "max_concurrent", "timeout_ms", "retry", "requests_path",
                "responses_path", "strict", "repair"});
    c.strict = get<bool>(a, "strict", false);
    c.repair = get<bool>(a, "repair", false);
    a.erase("strict");
    a.erase("repair");
    c.service = ServiceConfig::from_json(a);
  }
  if (j.contains("selector")) c.selector = SelectorConfig::from_json(j["selector"]);
  if (j.contains("bootstrap")) c.bootstrap = BootstrapConfig::from_json(j["bootstrap"]);
  if (j.contains("seed")) c.bootstrap.seed = get<std::uint64_t>(j, "seed", c.bootstrap.seed);
  if (j.contains("tokens")) {
    const Json& t = j["tokens"];
    check_keys(t, "tokens", {"scheme", "vocab"});
    c.token_scheme = token_scheme_from_string(get<std::string>(t, "scheme", "whitespace"));
    c.vocab = get<std::string>(t, "vocab", "");
    if (c.token_scheme == TokenScheme::pluggable && c.vocab.empty()) {
      throw Error(ErrorCode::config, "the pluggable token scheme needs tokens.vocab");
    }
  }
  if (j.contains("report")) {
    const Json& r = j["report"];
    check_keys(r, "report", {"baseline", "results", "base_method"});
    c.baseline_metrics = get<std::string>(r, "baseline", "");
    c.results = get<std::string>(r, "results", "");
    c.base_method = get<std::string>(r, "base_method", c.base_method);
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::config, fmt::format("'{}' is not valid JSON", path));
  fs::path base = fs::path(path).parent_path();
  return from_json(j, base.empty() ? fs::path(".") : base);
}

std::string PipelineConfig::resolve(const std::string& p) const {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_absolute()) return path.string();
  return (base_dir / path).lexically_normal().string();
}

std::string PipelineConfig::out(const std::string& name) const {
  return (fs::path(resolve(output_dir)) / name).string();
}

const std::vector<std::string>& pipeline_stage_names() {
  static const std::vector<std::string> names{"filter",  "segment",  "annotate-taxonomy", "annotate-tree",
                                              "tree",    "annotate-judgment", "ecn", "export-sft",
                                              "metrics", "report"};
  return names;
}

TokenCounter make_token_counter(TokenScheme scheme, const std::string& vocab) {
  if (scheme == TokenScheme::whitespace) return TokenCounter();
  if (vocab.empty()) throw Error(ErrorCode::config, "the pluggable token scheme needs a vocabulary file");
  return TokenCounter(std::make_shared<TokenizerTable>(TokenizerTable::load(vocab)));
}

Json StageOutcome::to_json() const {
  Json j{{"stage", name}, {"status", status}};
  if (!outputs.empty()) j["outputs"] = outputs;
  if (stats) j["stats"] = stats->to_json();
  if (error_code) j["error"] = *error_code;
  if (message) j["message"] = *message;
  return j;
}

Json PipelineResult::to_json() const {
  Json arr = Json::array();
  for (const auto& s : stages) arr.push_back(s.to_json());
  return Json{{"status", ok ? "ok" : "error"}, {"stages", arr}};
}

PipelineResult run_pipeline(const PipelineConfig& cfg, const PipelineOptions& opts) {
  StageContext ctx;
  ctx.workers = opts.workers.value_or(cfg.workers);
  ctx.tokens = make_token_counter(cfg.token_scheme, cfg.resolve(cfg.vocab));
  ctx.log = opts.log;

  AnnotateOptions annot;
  annot.service = cfg.service;
  if (opts.annotator) annot.service.mode = *opts.annotator;
  if (annot.service.mode != ServiceMode::heuristic && annot.service.mode != ServiceMode::live) {
    throw Error(ErrorCode::config,
                "pipeline runs with the heuristic or live annotator; use the annotate subcommand for batch files");
  }
  annot.strict = cfg.strict;
  annot.repair = cfg.repair;
  BootstrapConfig boot = cfg.bootstrap;
  if (opts.seed) boot.seed = *opts.seed;

  const std::string traces = cfg.resolve(cfg.traces);
  const std::string problems = cfg.resolve(cfg.problems);
  auto enabled = [&](const std::string& name) {
    auto it = cfg.stages.find(name);
    return it == cfg.stages.end() || it->second;
  };
  const bool filter_on = enabled("filter");
  const std::string kept = cfg.out("kept.jsonl");
  const std::string nodes = cfg.out("nodes.jsonl");
  const std::string labels = cfg.out("labels.jsonl");
  const std::string tree_responses = cfg.out("tree_responses.jsonl");
  const std::string trees = cfg.out("trees.jsonl");
  const std::string judgments = cfg.out("judgments.jsonl");
  const std::string pruned = cfg.out("pruned.jsonl");
  const std::string excluded = cfg.out("excluded.jsonl");
  const std::string sft = cfg.out("sft.jsonl");
  const std::string metrics = cfg.out("metrics.jsonl");
  const std::string report_dir = cfg.out("report");

  struct Stage {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::function<StageStats()> run;
  };
  std::vector<std::string> report_outputs;
  for (const auto& f : report_files(!cfg.results.empty())) report_outputs.push_back((fs::path(report_dir) / f).string());

  std::vector<Stage> stages{
      {"filter", {traces, problems}, {kept},
       [&] { return filter_stage(ctx, traces, problems, kept, cfg.selector); }},
      {"segment", {filter_on ? kept : traces}, {nodes},
       [&] { return segment_stage(ctx, filter_on ? kept : traces, nodes, cfg.segmenter); }},
      {"annotate-taxonomy", {nodes}, {labels},
       [&] { return annotate_stage(ctx, PromptKind::taxonomy, {nodes, problems, "", labels, ""}, annot); }},
      {"annotate-tree", {nodes, labels}, {tree_responses},
       [&] { return annotate_stage(ctx, PromptKind::tree, {nodes, problems, labels, tree_responses, ""}, annot); }},
      {"tree", {tree_responses, nodes}, {trees},
       [&] { return tree_stage(ctx, tree_responses, nodes, trees, "", cfg.strict, cfg.repair); }},
      {"annotate-judgment", {nodes, problems, labels}, {judgments},
       [&] { return annotate_stage(ctx, PromptKind::judgment, {nodes, problems, labels, judgments, ""}, annot); }},
      {"ecn", {nodes, labels, judgments, problems}, {pruned, excluded},
       [&] { return ecn_stage(ctx, {nodes, labels, judgments, problems, pruned, excluded}); }},
      {"export-sft", {pruned, problems}, {sft, sft_summary_path(sft)},
       [&] { return export_sft_stage(ctx, pruned, problems, sft); }},
      {"metrics", {trees, nodes, labels}, {metrics},
       [&] { return metrics_stage(ctx, trees, nodes, labels, metrics); }},
      {"report", {metrics, cfg.resolve(cfg.baseline_metrics), cfg.resolve(cfg.results)}, report_outputs,
       [&] {
         return report_stage(ctx, {metrics, cfg.resolve(cfg.baseline_metrics), cfg.resolve(cfg.results), report_dir},
                             boot, cfg.base_method);
       }},
  };

  PipelineResult result;
  bool upstream_ran = false;
  bool failed = false;
  for (auto& st : stages) {
    StageOutcome o;
    o.name = st.name;
    o.outputs = st.outputs;
    if (failed) {
      o.status = "not_run";
    } else if (!enabled(st.name)) {
      o.status = "disabled";
    } else if (!opts.force && !upstream_ran && all_exist(st.outputs)) {
      o.status = "skipped";
      if (opts.log) opts.log(fmt::format("{}: outputs present, skipped", st.name));
    } else {
      try {
        require_inputs(st.inputs);
        o.stats = st.run();
        o.status = "ran";
        upstream_ran = true;
      } catch (const Error& e) {
        o.status = "failed";
        o.error_code = std::string(to_string(e.code()));
        o.message = e.what();
        failed = true;
        result.ok = false;
        if (opts.log) opts.log(fmt::format("{}: failed: {}", st.name, e.what()));
      }
    }
    result.stages.push_back(std::move(o));
  }
  return result;
}

}  // namespace cotkit
