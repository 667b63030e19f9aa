#include <initializer_list>

#include "cotkit/annotator.hpp"
#include "cotkit/text_util.hpp"

namespace cotkit {

namespace {

// Node text with leading whitespace, think tags and emphasis removed.
std::string_view lead(std::string_view s) {
  for (bool changed = true; changed;) {
    changed = false;
    s = text::trim(s);
    for (std::string_view prefix : {"<think>", "</think>", "**", "*", "\"", "-"}) {
      if (s.substr(0, prefix.size()) == prefix) {
        s.remove_prefix(prefix.size());
        changed = true;
      }
    }
  }
  return s;
}

bool starts_with_word(std::string_view s, std::string_view word) {
  if (!text::istarts_with(s, word)) return false;
  return s.size() == word.size() || !text::is_alnum(s[word.size()]);
}

// Case-insensitive match of `stem` at the start of some word.
bool has_word_stem(std::string_view s, std::string_view stem) {
  for (std::size_t p = text::ifind(s, stem); p != std::string_view::npos; p = text::ifind(s, stem, p + 1)) {
    if (p == 0 || !std::isalpha(static_cast<unsigned char>(s[p - 1]))) return true;
  }
  return false;
}

bool any_stem(std::string_view s, std::initializer_list<std::string_view> stems) {
  for (auto stem : stems) {
    if (has_word_stem(s, stem)) return true;
  }
  return false;
}

NodeType classify(std::string_view node_text) {
  std::string_view head = lead(node_text);
  if (starts_with_word(head, "wait") || starts_with_word(head, "hmm") ||
      starts_with_word(head, "i made")) {
    return NodeType::Backtracking;
  }
  if (any_stem(node_text, {"check", "verif", "confirm"})) return NodeType::Verification;
  if (any_stem(node_text, {"alternatively", "try", "suppose"})) return NodeType::Exploration;
  if (any_stem(node_text, {"therefore", "so the answer", "final answer"}) ||
      last_boxed(node_text).has_value()) {
    return NodeType::Conclusion;
  }
  return NodeType::Clarification;
}

}  // namespace

std::vector<TaxonomyLabel> heuristic_labels(const SourceNodeSequence& seq) {
  std::vector<TaxonomyLabel> out;
  out.reserve(seq.nodes.size());
  for (const auto& n : seq.nodes) out.push_back({n.label, classify(n.text), std::nullopt});
  return out;
}

GroupedTree heuristic_tree(const SourceNodeSequence& seq, const std::vector<TaxonomyLabel>& labels) {
  GroupedTree tree;
  tree.set_trace_id(seq.trace_id);
  if (seq.nodes.empty()) return tree;
  auto type_at = [&](std::size_t i) {
    return i < labels.size() ? labels[i].primary : NodeType::Clarification;
  };
  auto attach = [&](std::size_t parent, int label) {
    const TreeNode& p = tree.node(parent);
    std::string id = p.id + "." + std::to_string(p.children.size() + 1);
    return tree.add_node(parent, std::move(id), {label});
  };

  std::size_t cur = tree.add_node(std::nullopt, "1", {1});
  for (std::size_t i = 1; i < seq.nodes.size(); ++i) {
    int label = static_cast<int>(i) + 1;
    auto parent = tree.node(cur).parent;
    std::size_t target = cur;
    switch (type_at(i)) {
      case NodeType::Backtracking:
        if (parent && tree.node(*parent).parent) {
          target = *tree.node(*parent).parent;
        } else if (parent) {
          target = *parent;
        }
        break;
      case NodeType::Exploration:
        if (parent) target = *parent;
        break;
      default:
        break;
    }
    cur = attach(target, label);
  }
  return tree;
}

std::vector<ConclusionJudgment> heuristic_judgments(const SourceNodeSequence& seq,
                                                    const std::vector<TaxonomyLabel>& labels,
                                                    const CanonicalAnswer& gold) {
  std::vector<ConclusionJudgment> out;
  for (std::size_t i = 0; i < seq.nodes.size() && i < labels.size(); ++i) {
    if (labels[i].primary != NodeType::Conclusion) continue;
    auto answer = extract_answer(seq.nodes[i].text);
    ConclusionJudgment j;
    j.node_label = seq.nodes[i].label;
    if (answer) {
      j.kind = ConclusionKind::AnsweringConclusion;
      j.is_correct = answers_match(*answer, gold);
    } else {
      j.kind = ConclusionKind::IntermediateConclusion;
      j.is_correct = false;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::string heuristic_response(PromptKind kind, const SourceNodeSequence& seq,
                               const std::vector<TaxonomyLabel>& labels,
                               const ProblemRecord& problem) {
  std::string out;
  switch (kind) {
    case PromptKind::taxonomy:
      for (const auto& l : labels) out += to_json(l).dump() + "\n";
      break;
    case PromptKind::tree:
      out = heuristic_tree(seq, labels).to_json().dump(2) + "\n";
      break;
    case PromptKind::judgment: {
      CanonicalAnswer gold = normalize_answer(problem.gold_answer);
      for (const auto& j : heuristic_judgments(seq, labels, gold)) out += to_json(j).dump() + "\n";
      break;
    }
  }
  return out;
}

}  // namespace cotkit
