#pragma once

// Corpus-level statistics: percentile bootstrap intervals, accuracy/token
// summaries, morphology deltas and label agreement.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cotkit/metrics.hpp"
#include "cotkit/records.hpp"

namespace cotkit {

struct BootstrapConfig {
  int resamples = 10000;
  double level = 0.95;
  std::uint64_t seed = 1;

  void validate() const;
  static BootstrapConfig from_json(const Json& j);
  Json to_json() const;
};

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Uniform integer in [0, n) from a 64-bit generator by rejection, so the
/// draw sequence does not depend on the standard library.
std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t n);

/// Mean of each of B resamples (with replacement, size n). Resample b uses
/// its own generator seeded from (seed, b), so the result does not depend
/// on `workers`.
std::vector<double> bootstrap_means(const std::vector<double>& samples, const BootstrapConfig& config,
                                    std::size_t workers = 1);

/// Linear-interpolation quantile of sorted data (p in [0, 1]).
double quantile_sorted(const std::vector<double>& sorted, double p);

/// Percentile interval. Throws Error(usage) on empty samples.
Interval bootstrap_ci(const std::vector<double>& samples, const BootstrapConfig& config,
                      std::size_t workers = 1);

/// One question answered by one method.
struct QuestionResult {
  std::string method;
  std::string question_id;
  bool correct = false;
  double tokens = 0;
};

QuestionResult question_result_from_json(const Json& j);

struct SummaryRow {
  std::string method;
  std::size_t questions = 0;
  double accuracy = 0;
  double accuracy_delta = 0;
  double mean_tokens = 0;
  double token_delta_pct = 0;
  std::optional<Interval> accuracy_ci;
  std::optional<Interval> tokens_ci;

  Json to_json() const;
};

/// Row arithmetic from already aggregated means.
SummaryRow summary_from_means(std::string method, double accuracy, double mean_tokens, double base_accuracy,
                              double base_mean_tokens);

/// Rows in order of first appearance; `base_method` must be present. Every
/// method must cover the same question set, else Error(join). CIs are
/// computed when `bootstrap` is given.
std::vector<SummaryRow> corpus_summary(const std::vector<QuestionResult>& results,
                                       const std::string& base_method,
                                       const std::optional<BootstrapConfig>& bootstrap = std::nullopt);

struct DeltaRow {
  std::string key;
  std::string title;
  double mean_a = 0;
  double mean_b = 0;
  double delta = 0;  // mean_a - mean_b
};

std::vector<DeltaRow> delta_from_means(const std::array<double, 12>& mean_a, const std::array<double, 12>& mean_b);

/// Per-metric means of each corpus and their difference. Throws
/// Error(usage) if either corpus is empty.
std::vector<DeltaRow> morphology_delta(const std::vector<MorphologyReport>& a,
                                       const std::vector<MorphologyReport>& b);

std::array<double, 12> morphology_means(const std::vector<MorphologyReport>& reports);

/// Fraction of aligned positions with equal primary labels. Misaligned
/// lengths or node ids throw Error(join).
double agreement_rate(const std::vector<TaxonomyLabel>& a, const std::vector<TaxonomyLabel>& b);

}  // namespace cotkit
