#pragma once

// File-level stage runners shared by the subcommands and the pipeline.
// Each reads its JSONL inputs, writes outputs atomically and keeps the
// input record order regardless of the worker count.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cotkit/annotate.hpp"
#include "cotkit/ecn.hpp"
#include "cotkit/report.hpp"
#include "cotkit/segmenter.hpp"
#include "cotkit/selector.hpp"
#include "cotkit/stats.hpp"
#include "cotkit/tokens.hpp"

namespace cotkit {

struct StageContext {
  std::size_t workers = 1;
  TokenCounter tokens;
  // Receives one plain-text line per notable event; may be empty.
  std::function<void(const std::string&)> log;
};

/// Counts reported back to the caller (and into the CLI summary).
struct StageStats {
  std::size_t read = 0;
  std::size_t written = 0;
  std::size_t failed = 0;
  Json details = Json::object();

  Json to_json() const;
};

StageStats segment_stage(const StageContext& ctx, const std::string& traces, const std::string& out,
                         const SegmenterConfig& config);

StageStats filter_stage(const StageContext& ctx, const std::string& traces, const std::string& problems,
                        const std::string& out, const SelectorConfig& config);

struct AnnotatePaths {
  std::string nodes;
  std::string problems;  // required for judgments
  std::string labels;    // required for judgments; optional otherwise
  std::string out;
  std::string failures;  // defaults to <out>.failures.jsonl
};

/// Tree annotations are written as raw {trace_id, text} responses for the
/// tree stage. In batch-export mode only the request file is written.
StageStats annotate_stage(const StageContext& ctx, PromptKind kind, const AnnotatePaths& paths,
                          AnnotateOptions options);

/// Parses {trace_id, text} responses (or {trace_id, tree} records) into
/// trees.jsonl. `nodes`, when given, supplies each trace's node count.
StageStats tree_stage(const StageContext& ctx, const std::string& responses, const std::string& nodes,
                      const std::string& out, const std::string& failures, bool strict, bool repair);

struct EcnPaths {
  std::string nodes;
  std::string labels;
  std::string judgments;
  std::string problems;
  std::string out;
  std::string quarantine;
};

/// Every input trace ends up in exactly one of the two outputs.
StageStats ecn_stage(const StageContext& ctx, const EcnPaths& paths);

/// Also writes <out without .jsonl>.summary.json.
StageStats export_sft_stage(const StageContext& ctx, const std::string& pruned, const std::string& problems,
                            const std::string& out);

std::string sft_summary_path(const std::string& sft_path);

/// Trees and labels are optional; traces missing them get null sections.
StageStats metrics_stage(const StageContext& ctx, const std::string& trees, const std::string& nodes,
                         const std::string& labels, const std::string& out);

struct ReportPaths {
  std::string metrics;
  std::string baseline;  // optional
  std::string results;   // optional
  std::string out_dir;
};

StageStats report_stage(const StageContext& ctx, const ReportPaths& paths, const BootstrapConfig& bootstrap,
                        const std::string& base_method = "base");

Json pruned_record(const SourceNodeSequence& pruned, const EcnResult& result, std::size_t original_length,
                   std::size_t original_tokens, std::size_t pruned_tokens);
PrunedTrace pruned_from_json(const Json& j);

}  // namespace cotkit
