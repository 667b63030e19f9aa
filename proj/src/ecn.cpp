#include "cotkit/ecn.hpp"

#include <map>

#include <fmt/format.h>

namespace cotkit {

std::string_view to_string(EcnStatus s) { return s == EcnStatus::pruned ? "pruned" : "excluded"; }

EcnResult find_ecn(const SourceNodeSequence& seq, const std::vector<TaxonomyLabel>& labels,
                   const std::vector<ConclusionJudgment>& judgments, const CanonicalAnswer& gold) {
  EcnResult result;
  result.trace_id = seq.trace_id;
  const int m = static_cast<int>(seq.length());

  std::map<int, NodeType> primary;
  for (const auto& l : labels) {
    auto idx = parse_node_label(l.node_label);
    if (!idx) throw Error(ErrorCode::parse, fmt::format("bad node label '{}'", l.node_label));
    primary[*idx] = l.primary;
  }
  for (int i = 1; i <= m; ++i) {
    if (!primary.count(i)) {
      throw Error(ErrorCode::incomplete,
                  fmt::format("trace '{}': no taxonomy label for {}", seq.trace_id, node_label(i)));
    }
  }

  std::map<int, const ConclusionJudgment*> judged;
  for (const auto& j : judgments) {
    auto idx = parse_node_label(j.node_label);
    if (!idx) throw Error(ErrorCode::parse, fmt::format("bad node label '{}'", j.node_label));
    auto it = primary.find(*idx);
    if (it == primary.end() || it->second != NodeType::Conclusion) {
      result.warnings.push_back(
          fmt::format("judgment for {} ignored: node is not labeled Conclusion", j.node_label));
      continue;
    }
    judged[*idx] = &j;
  }

  for (int i = 1; i <= m; ++i) {
    if (primary[i] != NodeType::Conclusion) continue;
    auto extracted = extract_answer(seq.nodes[i - 1].text);
    auto jt = judged.find(i);
    const ConclusionJudgment* judgment = jt == judged.end() ? nullptr : jt->second;

    if (!extracted && !judgment) {
      throw Error(ErrorCode::incomplete_judgments,
                  fmt::format("trace '{}': {} has no extractable answer and no judgment",
                              seq.trace_id, node_label(i)));
    }
    // Without a judgment the kind is unknown; an explicit answer is taken
    // as an attempt to answer.
    bool answering = judgment ? judgment->kind == ConclusionKind::AnsweringConclusion : true;
    if (!answering) continue;

    bool correct;
    if (extracted) {
      correct = answers_match(*extracted, gold);
      if (judgment && judgment->is_correct != correct) ++result.conflicts;
    } else {
      correct = judgment->is_correct;
    }
    if (correct) result.correct_set.push_back(i);
  }

  if (!result.correct_set.empty()) {
    result.ecn_index = result.correct_set.front();
    result.pruned_length = result.ecn_index;
    result.status = EcnStatus::pruned;
  }
  return result;
}

SourceNodeSequence prune(const SourceNodeSequence& seq, int k) {
  const int m = static_cast<int>(seq.length());
  if (k < 1 || k > m) {
    throw Error(ErrorCode::range, fmt::format("prune index {} outside 1..{}", k, m));
  }
  SourceNodeSequence out;
  out.trace_id = seq.trace_id;
  out.problem_id = seq.problem_id;
  out.nodes.assign(seq.nodes.begin(), seq.nodes.begin() + k);
  return out;
}

}  // namespace cotkit
