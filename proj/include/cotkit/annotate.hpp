#pragma once

// Corpus-level annotation: renders prompts, obtains responses from the
// configured source (live service, batch files or the offline heuristic),
// parses them and quarantines per-trace failures.

#include <optional>
#include <string>
#include <vector>

#include "cotkit/annotator.hpp"
#include "cotkit/service.hpp"
#include "cotkit/tree.hpp"

namespace cotkit {

struct AnnotationInput {
  SourceNodeSequence seq;
  ProblemRecord problem;
  // Taxonomy labels; needed for judgment prompts and heuristic trees.
  std::vector<TaxonomyLabel> labels;
};

struct AnnotationRecord {
  std::string trace_id;
  PromptKind kind = PromptKind::taxonomy;
  std::string response;
  std::vector<TaxonomyLabel> labels;
  std::optional<GroupedTree> tree;
  std::vector<ConclusionJudgment> judgments;
  std::vector<std::string> warnings;

  /// labels.jsonl, trees.jsonl or judgments.jsonl record; an unparsed tree
  /// response becomes a {trace_id, text} response record.
  Json to_json() const;
};

struct AnnotationFailure {
  std::string trace_id;
  ErrorCode code = ErrorCode::parse;
  std::string message;
  std::vector<Diagnostic> diagnostics;

  Json to_json() const;
};

struct AnnotationResult {
  std::vector<AnnotationRecord> records;
  std::vector<AnnotationFailure> failures;
  // Requests written in batch-export mode.
  std::size_t exported = 0;
};

struct AnnotateOptions {
  ServiceConfig service;
  bool strict = false;
  bool repair = false;
  // When false, tree responses are kept raw for the tree stage.
  bool parse_trees = true;
  // Live mode: overrides the HTTP client (tests inject fakes here).
  CompletionService* client = nullptr;
  SleepFn sleep;  // defaults to std::this_thread::sleep_for
};

/// Results come back in input order for every mode and concurrency level.
/// Traces whose judgment prompt has no Conclusion nodes get an empty
/// judgment set without contacting the service.
AnnotationResult annotate(const std::vector<AnnotationInput>& inputs, PromptKind kind,
                          const AnnotateOptions& options);

/// Parses one response for `input` according to `kind`.
AnnotationRecord parse_annotation(const AnnotationInput& input, PromptKind kind,
                                  std::string response, const AnnotateOptions& options);

}  // namespace cotkit
