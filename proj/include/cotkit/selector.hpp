#pragma once

// Best-of-K filtering, intermediate-length selection and SFT export.

#include <string>
#include <vector>

#include "cotkit/answer.hpp"
#include "cotkit/records.hpp"
#include "cotkit/tokens.hpp"

namespace cotkit {

enum class LengthRule { median, shortest, longest };
enum class TieBreak { shorter, earlier_id };

std::string_view to_string(LengthRule r);
std::string_view to_string(TieBreak t);
LengthRule length_rule_from_string(std::string_view s);
TieBreak tie_break_from_string(std::string_view s);

struct SelectorConfig {
  int k_candidates = 4;
  LengthRule length_rule = LengthRule::median;
  TieBreak tie_break = TieBreak::shorter;

  void validate() const;
  static SelectorConfig from_json(const Json& j);
  Json to_json() const;
};

/// Candidates whose extracted final answer matches the gold answer, in input
/// order. A candidate's final answer is extracted from its whole text.
std::vector<TraceRecord> best_of_k(const std::vector<TraceRecord>& candidates,
                                   const CanonicalAnswer& gold);

/// Sorts by token count (ties per config) and returns the element chosen by
/// the length rule; median is the lower median. Throws Error(usage) when
/// empty.
TraceRecord select_intermediate(const std::vector<TraceRecord>& correct, const SelectorConfig& config,
                                const TokenCounter& counter = {});

struct FilterStats {
  std::size_t problems = 0;
  std::size_t candidates = 0;
  std::size_t truncated = 0;  // candidates beyond K that were ignored
  std::size_t without_correct = 0;
  std::vector<std::string> missing_problems;
};

/// Groups traces by problem (first appearance order), keeps at most K per
/// problem, filters and selects one. Output follows problem appearance
/// order. Traces referencing unknown problems throw Error(join).
std::vector<TraceRecord> filter_corpus(const std::vector<TraceRecord>& traces,
                                       const std::vector<ProblemRecord>& problems,
                                       const SelectorConfig& config, const TokenCounter& counter,
                                       std::size_t workers = 1, FilterStats* stats = nullptr);

struct SftRecord {
  std::string problem_id;
  std::string trace_id;
  std::string prompt;
  std::string target;
  int ecn_index = 0;
  std::size_t original_tokens = 0;
  std::size_t pruned_tokens = 0;

  Json to_json() const;
};

struct SftSummary {
  std::size_t count = 0;
  double mean_original_tokens = 0;
  double mean_pruned_tokens = 0;
  // Mean over records of 100 * (1 - pruned/original).
  double mean_reduction_pct = 0;
  TokenScheme token_scheme = TokenScheme::whitespace;

  Json to_json() const;
};

/// One pruned trace as produced by the ECN stage.
struct PrunedTrace {
  SourceNodeSequence seq;  // pruned prefix
  int ecn_index = 0;
  std::size_t original_tokens = 0;
};

/// Joins pruned traces with problems and sorts by (problem_id, trace_id).
/// Dangling problem ids throw Error(join) listing every offender.
std::vector<SftRecord> build_sft(const std::vector<PrunedTrace>& pruned,
                                 const std::vector<ProblemRecord>& problems,
                                 const TokenCounter& counter);

SftSummary summarize_sft(const std::vector<SftRecord>& records, TokenScheme scheme);

}  // namespace cotkit
