#pragma once

// Annotation prompts, structured-response parsers and the deterministic
// offline labeler. Service plumbing lives in service.hpp / annotate.hpp.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cotkit/answer.hpp"
#include "cotkit/records.hpp"
#include "cotkit/tree.hpp"

namespace cotkit {

enum class PromptKind { taxonomy, tree, judgment };

std::string_view to_string(PromptKind k);
PromptKind prompt_kind_from_string(std::string_view s);

struct DecodeSettings {
  double temperature = 0.0;
  bool sampling = false;
};

struct PromptRequest {
  PromptKind kind = PromptKind::taxonomy;
  std::string trace_id;
  std::string rendered_prompt;
  DecodeSettings decode;
};

/// `["N1: <text>", "N2: <text>"]` with node texts verbatim.
std::string render_node_list(const SourceNodeSequence& seq);

/// Fills the taxonomy, tree or judgment template. The judgment kind needs
/// the Conclusion-labeled node ids and a gold answer; an empty id list
/// throws Error(no_conclusions).
PromptRequest render_prompt(PromptKind kind, const ProblemRecord& problem,
                            const SourceNodeSequence& seq,
                            const std::vector<std::string>& conclusion_nodes = {});

/// Node ids whose primary label is Conclusion, in sequence order.
std::vector<std::string> conclusion_nodes(const std::vector<TaxonomyLabel>& labels);

struct ResponseParseOptions {
  // Reject fences, prose and any line that is not a schema object.
  bool strict = false;
};

/// One label per node N1..Nm, ordered by index. Errors: INCOMPLETE when a
/// node is unlabeled, BAD_CLASS for unknown classes, DUPLICATE for repeated
/// ids, RANGE for ids beyond m, PARSE for malformed JSON lines.
std::vector<TaxonomyLabel> parse_taxonomy_labels(std::string_view response, int m,
                                                 const ResponseParseOptions& options = {});

/// Errors: BAD_KIND for unknown type text, PARSE (with line number) for
/// malformed lines. An empty response yields an empty list and a warning.
std::vector<ConclusionJudgment> parse_conclusion_judgments(
    std::string_view response, const ResponseParseOptions& options = {},
    std::vector<std::string>* warnings = nullptr);

// Offline heuristics ---------------------------------------------------------

/// Fixed keyword rules, first match wins: leading Wait/Hmm/"I made" is
/// Backtracking; a word starting check/verif/confirm anywhere is
/// Verification; Alternatively/try/suppose is Exploration; Therefore,
/// "So the answer", "Final Answer" or a boxed answer is Conclusion; anything
/// else is Clarification. Keyword matching is case-insensitive.
std::vector<TaxonomyLabel> heuristic_labels(const SourceNodeSequence& seq);

/// Tree built from the labels alone: Backtracking climbs to a sibling of the
/// current parent, Exploration opens a sibling of the current node, every
/// other class descends as a child.
GroupedTree heuristic_tree(const SourceNodeSequence& seq, const std::vector<TaxonomyLabel>& labels);

/// Conclusion nodes with an extractable answer are answering conclusions
/// judged against the gold answer; the rest are intermediate.
std::vector<ConclusionJudgment> heuristic_judgments(const SourceNodeSequence& seq,
                                                    const std::vector<TaxonomyLabel>& labels,
                                                    const CanonicalAnswer& gold);

/// Renders heuristic output in the same text format the annotation service
/// is asked to produce, so it flows through the regular parsers.
std::string heuristic_response(PromptKind kind, const SourceNodeSequence& seq,
                               const std::vector<TaxonomyLabel>& labels,
                               const ProblemRecord& problem);

}  // namespace cotkit
