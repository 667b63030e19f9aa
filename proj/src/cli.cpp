#include "cotkit/cli.hpp"

#include <filesystem>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cotkit/jsonl.hpp"
#include "cotkit/pipeline.hpp"
#include "cotkit/stages.hpp"
#include "cotkit/validate.hpp"

#ifndef COTKIT_VERSION
#define COTKIT_VERSION "0.0.0"
#endif

namespace cotkit {

std::string version_string() { return std::string("cotkit ") + COTKIT_VERSION; }

namespace {

struct Common {
  std::size_t workers = 1;
  bool quiet = false;
  std::string token_scheme = "whitespace";
  std::string vocab;
};

void add_common(CLI::App* sub, Common& c, bool tokens) {
  sub->set_version_flag("--version", version_string());
  sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", c.quiet, "Suppress log lines");
  if (tokens) {
    sub->add_option("--token-scheme", c.token_scheme, "whitespace or pluggable")
        ->check(CLI::IsMember({"whitespace", "pluggable"}));
    sub->add_option("--tokenizer", c.vocab, "Vocabulary file for the pluggable scheme (one piece per line)");
  }
}

StageContext context(const Common& c, std::ostream& err) {
  StageContext ctx;
  ctx.workers = c.workers;
  TokenScheme scheme = token_scheme_from_string(c.token_scheme);
  if (!c.vocab.empty()) scheme = TokenScheme::pluggable;
  ctx.tokens = make_token_counter(scheme, c.vocab);
  if (!c.quiet) ctx.log = [&err](const std::string& line) { err << line << '\n'; };
  return ctx;
}

Json error_json(const std::string& command, std::string_view code, const std::string& message) {
  return Json{{"status", "error"}, {"command", command}, {"error", code}, {"message", message}};
}

std::optional<SchemaKind> infer_kind(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  for (auto [prefix, kind] : std::initializer_list<std::pair<const char*, SchemaKind>>{
           {"problem", SchemaKind::problem}, {"trace", SchemaKind::trace}, {"kept", SchemaKind::trace},
           {"node", SchemaKind::nodes},      {"label", SchemaKind::labels}, {"judgment", SchemaKind::judgments},
           {"tree", SchemaKind::tree}}) {
    if (stem.rfind(prefix, 0) == 0) return kind;
  }
  return std::nullopt;
}

Json diagnostic_json(const Diagnostic& d) {
  Json j{{"code", d.code}, {"message", d.message}};
  if (!d.location.empty()) j["location"] = d.location;
  j["severity"] = d.severity == Severity::error ? "error" : "warning";
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chain-of-thought trace toolkit: segmentation, annotation, trees, earliest-correct-node pruning, "
               "metrics and reports.",
               "cotkit"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  // segment
  Common seg_c;
  std::string seg_in, seg_out, seg_cfg;
  auto* seg = app.add_subcommand("segment", "Split traces into source nodes");
  seg->add_option("--in", seg_in, "traces.jsonl")->required();
  seg->add_option("--out", seg_out, "nodes.jsonl")->required();
  seg->add_option("--config", seg_cfg, "Segmenter config JSON");
  add_common(seg, seg_c, false);

  // filter
  Common fil_c;
  std::string fil_traces, fil_problems, fil_out, fil_rule = "median", fil_tie = "shorter";
  int fil_k = 4;
  auto* fil = app.add_subcommand("filter", "Best-of-K filtering and intermediate-length selection");
  fil->add_option("--traces", fil_traces, "traces.jsonl")->required();
  fil->add_option("--problems", fil_problems, "problems.jsonl")->required();
  fil->add_option("--out", fil_out, "kept.jsonl")->required();
  fil->add_option("--k", fil_k, "Candidates per problem")->check(CLI::PositiveNumber);
  fil->add_option("--rule", fil_rule, "median, shortest or longest")
      ->check(CLI::IsMember({"median", "shortest", "longest"}));
  fil->add_option("--tie-break", fil_tie, "shorter or earlier_id")->check(CLI::IsMember({"shorter", "earlier_id"}));
  add_common(fil, fil_c, true);

  // annotate
  Common ann_c;
  std::string ann_kind, ann_in, ann_out, ann_mode, ann_annotator, ann_problems, ann_labels, ann_requests,
      ann_responses, ann_endpoint, ann_auth, ann_cfg, ann_failures;
  int ann_conc = 0, ann_attempts = 0, ann_backoff = -1, ann_timeout = 0;
  bool ann_strict = false, ann_repair = false;
  auto* ann = app.add_subcommand("annotate", "Taxonomy, tree or judgment annotation");
  ann->add_option("--kind", ann_kind, "taxonomy, tree or judgment")
      ->required()
      ->check(CLI::IsMember({"taxonomy", "tree", "judgment"}));
  ann->add_option("--in", ann_in, "nodes.jsonl")->required();
  ann->add_option("--out", ann_out, "Output JSONL (request file in batch-export mode)")->required();
  ann->add_option("--mode", ann_mode, "live, batch-export, batch-import or heuristic")
      ->check(CLI::IsMember({"live", "batch-export", "batch-import", "heuristic"}));
  ann->add_option("--annotator", ann_annotator, "Alias for --mode")
      ->check(CLI::IsMember({"live", "batch-export", "batch-import", "heuristic"}));
  ann->add_option("--problems", ann_problems, "problems.jsonl (judgments)");
  ann->add_option("--labels", ann_labels, "labels.jsonl (judgments, heuristic trees)");
  ann->add_option("--requests", ann_requests, "Request file for batch-export");
  ann->add_option("--responses", ann_responses, "Response file for batch-import");
  ann->add_option("--endpoint", ann_endpoint, "Service URL for live mode");
  ann->add_option("--auth-env", ann_auth, "Environment variable holding the service key");
  ann->add_option("--max-concurrent", ann_conc, "In-flight requests")->check(CLI::PositiveNumber);
  ann->add_option("--max-attempts", ann_attempts, "Attempts per request")->check(CLI::PositiveNumber);
  ann->add_option("--backoff-ms", ann_backoff, "Base retry backoff")->check(CLI::NonNegativeNumber);
  ann->add_option("--timeout-ms", ann_timeout, "Per-request timeout")->check(CLI::PositiveNumber);
  ann->add_option("--config", ann_cfg, "Service config JSON");
  ann->add_option("--failures", ann_failures, "Failure list (default <out>.failures.jsonl)");
  ann->add_flag("--strict", ann_strict, "Reject any non-schema response content");
  ann->add_flag("--repair", ann_repair, "Append missing trailing labels to trees");
  add_common(ann, ann_c, false);

  // tree
  Common tre_c;
  std::string tre_in, tre_out, tre_nodes, tre_failures;
  bool tre_strict = false, tre_repair = false;
  auto* tre = app.add_subcommand("tree", "Parse and validate tree responses");
  tre->add_option("--in", tre_in, "responses.jsonl with {trace_id, text}")->required();
  tre->add_option("--out", tre_out, "trees.jsonl")->required();
  tre->add_option("--nodes", tre_nodes, "nodes.jsonl, for node counts");
  tre->add_option("--failures", tre_failures, "Rejected trees (default <out>.failures.jsonl)");
  tre->add_flag("--strict", tre_strict, "Response must be exactly one tree object");
  tre->add_flag("--repair", tre_repair, "Append missing trailing labels under the last node");
  add_common(tre, tre_c, false);

  // ecn
  Common ecn_c;
  EcnPaths ecn_p;
  auto* ecn = app.add_subcommand("ecn", "Find the earliest correct node and prune");
  ecn->add_option("--nodes", ecn_p.nodes, "nodes.jsonl")->required();
  ecn->add_option("--labels", ecn_p.labels, "labels.jsonl")->required();
  ecn->add_option("--judgments", ecn_p.judgments, "judgments.jsonl");
  ecn->add_option("--problems", ecn_p.problems, "problems.jsonl")->required();
  ecn->add_option("--out", ecn_p.out, "pruned.jsonl")->required();
  ecn->add_option("--quarantine", ecn_p.quarantine, "excluded.jsonl")->required();
  add_common(ecn, ecn_c, true);

  // export-sft
  Common sft_c;
  std::string sft_pruned, sft_problems, sft_out;
  auto* sft = app.add_subcommand("export-sft", "Write SFT records from pruned traces");
  sft->add_option("--pruned", sft_pruned, "pruned.jsonl")->required();
  sft->add_option("--problems", sft_problems, "problems.jsonl")->required();
  sft->add_option("--out", sft_out, "sft.jsonl")->required();
  add_common(sft, sft_c, true);

  // metrics
  Common met_c;
  std::string met_trees, met_nodes, met_labels, met_out;
  auto* met = app.add_subcommand("metrics", "Per-trace morphology, answer-boundary and node-type metrics");
  met->add_option("--trees", met_trees, "trees.jsonl");
  met->add_option("--nodes", met_nodes, "nodes.jsonl")->required();
  met->add_option("--labels", met_labels, "labels.jsonl");
  met->add_option("--out", met_out, "metrics.jsonl")->required();
  add_common(met, met_c, true);

  // report
  Common rep_c;
  ReportPaths rep_p;
  BootstrapConfig rep_b;
  std::string rep_base = "base";
  auto* rep = app.add_subcommand("report", "Aggregate metrics into JSON and CSV tables");
  rep->add_option("--metrics", rep_p.metrics, "metrics.jsonl")->required();
  rep->add_option("--baseline", rep_p.baseline, "Baseline metrics.jsonl");
  rep->add_option("--results", rep_p.results, "Per-question results {method, question_id, correct, tokens}");
  rep->add_option("--out", rep_p.out_dir, "Report directory")->required();
  rep->add_option("--resamples", rep_b.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  rep->add_option("--level", rep_b.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  rep->add_option("--seed", rep_b.seed, "Bootstrap seed");
  rep->add_option("--base-method", rep_base, "Reference method in --results");
  add_common(rep, rep_c, true);

  // pipeline
  Common pip_c;
  std::string pip_cfg, pip_annotator;
  bool pip_force = false;
  std::optional<std::uint64_t> pip_seed;
  std::uint64_t pip_seed_v = 0;
  auto* pip = app.add_subcommand("pipeline", "Run every stage from a config file");
  pip->add_option("--config", pip_cfg, "Pipeline config JSON")->required();
  pip->add_flag("--force", pip_force, "Re-run stages whose outputs exist");
  pip->add_option("--annotator", pip_annotator, "heuristic or live")->check(CLI::IsMember({"heuristic", "live"}));
  auto* pip_seed_opt = pip->add_option("--seed", pip_seed_v, "Bootstrap seed");
  pip->set_version_flag("--version", version_string());
  auto* pip_workers = pip->add_option("--workers", pip_c.workers, "Worker threads")->check(CLI::PositiveNumber);
  pip->add_flag("--quiet", pip_c.quiet, "Suppress log lines");

  // validate
  std::string val_in, val_kind;
  auto* val = app.add_subcommand("validate", "Check a JSONL file against its record schema");
  val->add_option("--in", val_in, "JSONL file")->required();
  val->add_option("--kind", val_kind, "problem, trace, nodes, labels, judgments or tree (default: from file name)")
      ->check(CLI::IsMember({"problem", "trace", "nodes", "labels", "judgments", "tree"}));
  val->set_version_flag("--version", version_string());

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::string command;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << app.help() << '\n';
    err << error_json(args.size() > 1 ? args[1] : "", "USAGE", e.what()).dump() << '\n';
    return 2;
  }

  auto ok = [&](const std::string& cmd, const StageStats& s) {
    out << Json{{"status", "ok"}, {"command", cmd}, {"stats", s.to_json()}}.dump() << '\n';
    return 0;
  };

  try {
    if (seg->parsed()) {
      command = "segment";
      SegmenterConfig cfg;
      if (!seg_cfg.empty()) {
        Json j = Json::parse(read_text_file(seg_cfg), nullptr, false);
        if (j.is_discarded()) throw Error(ErrorCode::config, fmt::format("'{}' is not valid JSON", seg_cfg));
        cfg = SegmenterConfig::from_json(j.contains("segmenter") ? j["segmenter"] : j);
      }
      return ok(command, segment_stage(context(seg_c, err), seg_in, seg_out, cfg));
    }
    if (fil->parsed()) {
      command = "filter";
      SelectorConfig cfg;
      cfg.k_candidates = fil_k;
      cfg.length_rule = length_rule_from_string(fil_rule);
      cfg.tie_break = tie_break_from_string(fil_tie);
      return ok(command, filter_stage(context(fil_c, err), fil_traces, fil_problems, fil_out, cfg));
    }
    if (ann->parsed()) {
      command = "annotate";
      AnnotateOptions opts;
      if (!ann_cfg.empty()) {
        Json j = Json::parse(read_text_file(ann_cfg), nullptr, false);
        if (j.is_discarded()) throw Error(ErrorCode::config, fmt::format("'{}' is not valid JSON", ann_cfg));
        opts.service = ServiceConfig::from_json(j);
      }
      if (!ann_mode.empty() && !ann_annotator.empty() && ann_mode != ann_annotator) {
        throw Error(ErrorCode::usage, "--mode and --annotator disagree");
      }
      if (!ann_mode.empty()) opts.service.mode = service_mode_from_string(ann_mode);
      if (!ann_annotator.empty()) opts.service.mode = service_mode_from_string(ann_annotator);
      if (!ann_requests.empty()) opts.service.requests_path = ann_requests;
      if (!ann_responses.empty()) opts.service.responses_path = ann_responses;
      if (!ann_endpoint.empty()) opts.service.endpoint = ann_endpoint;
      if (!ann_auth.empty()) opts.service.auth_env_var = ann_auth;
      if (ann_conc > 0) opts.service.max_concurrent = ann_conc;
      if (ann_attempts > 0) opts.service.retry.max_attempts = ann_attempts;
      if (ann_backoff >= 0) opts.service.retry.backoff_base_ms = ann_backoff;
      if (ann_timeout > 0) opts.service.timeout_ms = ann_timeout;
      opts.strict = ann_strict;
      opts.repair = ann_repair;
      AnnotatePaths paths{ann_in, ann_problems, ann_labels, ann_out, ann_failures};
      return ok(command, annotate_stage(context(ann_c, err), prompt_kind_from_string(ann_kind), paths, opts));
    }
    if (tre->parsed()) {
      command = "tree";
      return ok(command,
                tree_stage(context(tre_c, err), tre_in, tre_nodes, tre_out, tre_failures, tre_strict, tre_repair));
    }
    if (ecn->parsed()) {
      command = "ecn";
      return ok(command, ecn_stage(context(ecn_c, err), ecn_p));
    }
    if (sft->parsed()) {
      command = "export-sft";
      return ok(command, export_sft_stage(context(sft_c, err), sft_pruned, sft_problems, sft_out));
    }
    if (met->parsed()) {
      command = "metrics";
      return ok(command, metrics_stage(context(met_c, err), met_trees, met_nodes, met_labels, met_out));
    }
    if (rep->parsed()) {
      command = "report";
      rep_b.validate();
      return ok(command, report_stage(context(rep_c, err), rep_p, rep_b, rep_base));
    }
    if (pip->parsed()) {
      command = "pipeline";
      PipelineConfig cfg = PipelineConfig::load(pip_cfg);
      PipelineOptions opts;
      opts.force = pip_force;
      if (pip_workers->count() > 0) opts.workers = pip_c.workers;
      if (!pip_annotator.empty()) opts.annotator = service_mode_from_string(pip_annotator);
      if (pip_seed_opt->count() > 0) pip_seed = pip_seed_v;
      opts.seed = pip_seed;
      if (!pip_c.quiet) opts.log = [&err](const std::string& line) { err << line << '\n'; };
      PipelineResult result = run_pipeline(cfg, opts);
      Json summary = result.to_json();
      summary["command"] = command;
      if (result.ok) {
        out << summary.dump() << '\n';
        return 0;
      }
      err << summary.dump() << '\n';
      return 1;
    }
    if (val->parsed()) {
      command = "validate";
      std::optional<SchemaKind> kind;
      if (!val_kind.empty()) {
        kind = schema_kind_from_string(val_kind);
      } else {
        kind = infer_kind(val_in);
      }
      if (!kind) throw Error(ErrorCode::usage, fmt::format("cannot infer record kind of '{}'; pass --kind", val_in));
      auto reports = validate_file(val_in, *kind);
      Json bad = Json::array();
      std::size_t warnings = 0;
      for (const auto& lr : reports) {
        Json diags = Json::array();
        for (const auto& d : lr.report.diagnostics) diags.push_back(diagnostic_json(d));
        out << Json{{"line", lr.line}, {"record_id", lr.report.record_id}, {"ok", lr.report.ok()},
                    {"diagnostics", diags}}
                   .dump()
            << '\n';
        if (!lr.report.ok()) {
          bad.push_back(lr.line);
        } else if (!lr.report.diagnostics.empty()) {
          ++warnings;
        }
      }
      if (!bad.empty()) {
        Json e = error_json(command, "INVALID", fmt::format("{} invalid line(s) in {}", bad.size(), val_in));
        e["lines"] = bad;
        err << e.dump() << '\n';
        return 1;
      }
      out << Json{{"status", "ok"}, {"command", command}, {"kind", to_string(*kind)}, {"lines_with_warnings", warnings}}
                 .dump()
          << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << error_json(command, to_string(e.code()), e.what()).dump() << '\n';
    return e.code() == ErrorCode::usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << error_json(command, "INTERNAL", e.what()).dump() << '\n';
    return 1;
  }
  err << error_json("", "USAGE", "no subcommand given").dump() << '\n';
  return 2;
}

}  // namespace cotkit
