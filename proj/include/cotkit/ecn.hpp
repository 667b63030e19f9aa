#pragma once

// Earliest-correct-node identification and prefix pruning.

#include <optional>
#include <string>
#include <vector>

#include "cotkit/answer.hpp"
#include "cotkit/records.hpp"

namespace cotkit {

enum class EcnStatus { pruned, excluded };

std::string_view to_string(EcnStatus s);

struct EcnResult {
  std::string trace_id;
  std::vector<int> correct_set;  // sorted source indices
  std::optional<int> ecn_index;
  std::optional<int> pruned_length;
  EcnStatus status = EcnStatus::excluded;
  // Nodes where the extracted answer and the service judgment disagreed.
  int conflicts = 0;
  std::vector<std::string> warnings;
};

/// The correct set holds every Conclusion-labeled node judged an answering
/// conclusion whose answer is correct. Correctness comes from explicit
/// extraction when it succeeds and from the judgment otherwise. Throws
/// Error(incomplete_judgments) when a Conclusion node has neither an
/// extractable answer nor a judgment, and Error(incomplete) when labels do
/// not cover the sequence.
EcnResult find_ecn(const SourceNodeSequence& seq, const std::vector<TaxonomyLabel>& labels,
                   const std::vector<ConclusionJudgment>& judgments, const CanonicalAnswer& gold);

/// The first k nodes, unchanged. Throws Error(range) unless 1 <= k <= m.
SourceNodeSequence prune(const SourceNodeSequence& seq, int k);

}  // namespace cotkit
