#pragma once

// End-to-end orchestration over a JSON config file. Relative paths resolve
// against the config file's directory.

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cotkit/stages.hpp"

namespace cotkit {

struct PipelineConfig {
  std::filesystem::path base_dir;
  std::string traces = "traces.jsonl";
  std::string problems = "problems.jsonl";
  std::string output_dir = "out";
  std::size_t workers = 1;

  // Stage toggles, keyed by stage name; absent means enabled.
  std::map<std::string, bool> stages;

  SegmenterConfig segmenter;
  ServiceConfig service;  // mode defaults to heuristic
  bool strict = false;
  bool repair = false;
  SelectorConfig selector;
  BootstrapConfig bootstrap;
  TokenScheme token_scheme = TokenScheme::whitespace;
  std::string vocab;  // tokenizer table for the pluggable scheme

  std::string baseline_metrics;  // optional, for the report
  std::string results;           // optional, for the report
  std::string base_method = "base";

  /// Throws Error(config) on unknown keys, bad values or unsupported modes.
  static PipelineConfig from_json(const Json& j, std::filesystem::path base_dir);
  static PipelineConfig load(const std::string& path);

  std::string resolve(const std::string& p) const;
  std::string out(const std::string& name) const;
};

/// Stage names in execution order.
const std::vector<std::string>& pipeline_stage_names();

struct PipelineOptions {
  bool force = false;
  std::optional<std::size_t> workers;
  std::optional<ServiceMode> annotator;
  std::optional<std::uint64_t> seed;
  std::function<void(const std::string&)> log;
};

struct StageOutcome {
  std::string name;
  std::string status;  // ran, skipped, disabled, failed, not_run
  std::vector<std::string> outputs;
  std::optional<StageStats> stats;
  std::optional<std::string> error_code;
  std::optional<std::string> message;

  Json to_json() const;
};

struct PipelineResult {
  bool ok = true;
  std::vector<StageOutcome> stages;

  Json to_json() const;
};

/// Runs every enabled stage in order. A stage whose outputs all exist is
/// skipped unless `force` is set or an earlier stage ran in this
/// invocation. After a failure the remaining stages are not run.
PipelineResult run_pipeline(const PipelineConfig& config, const PipelineOptions& options);

/// The token counter described by a scheme and optional vocabulary path.
TokenCounter make_token_counter(TokenScheme scheme, const std::string& vocab);

}  // namespace cotkit
