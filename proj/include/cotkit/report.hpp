#pragma once

// Report emission: one JSON document plus CSV tables. Output bytes depend
// only on the inputs and the bootstrap seed.

#include <optional>
#include <string>
#include <vector>

#include "cotkit/metrics.hpp"
#include "cotkit/stats.hpp"
#include "cotkit/tokens.hpp"

namespace cotkit {

struct ReportInputs {
  std::vector<TraceMetrics> metrics;
  std::optional<std::vector<TraceMetrics>> baseline;
  std::vector<QuestionResult> results;  // empty: no accuracy table
  std::string base_method = "base";
  BootstrapConfig bootstrap;
  TokenScheme token_scheme = TokenScheme::whitespace;
  std::size_t histogram_bins = 20;
  std::size_t workers = 1;
};

/// Names of the files written into the report directory.
std::vector<std::string> report_files(bool with_results);

/// Writes report.json, table1_summary.csv (when results are given),
/// table2_morphology.csv, table3_answer_boundary.csv, node_types.csv,
/// token_histogram.csv and token_lengths.csv. Returns the report JSON.
Json emit_report(const ReportInputs& inputs, const std::string& out_dir);

}  // namespace cotkit
