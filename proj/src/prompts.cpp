#include <fmt/format.h>

#include "cotkit/annotator.hpp"
#include "cotkit/text_util.hpp"

namespace cotkit {

std::string_view to_string(PromptKind k) {
  switch (k) {
    case PromptKind::taxonomy: return "taxonomy";
    case PromptKind::tree: return "tree";
    case PromptKind::judgment: return "judgment";
  }
  return "";
}

PromptKind prompt_kind_from_string(std::string_view s) {
  if (s == "taxonomy") return PromptKind::taxonomy;
  if (s == "tree") return PromptKind::tree;
  if (s == "judgment") return PromptKind::judgment;
  throw Error(ErrorCode::usage, fmt::format("unknown annotation kind '{}'", s));
}

namespace {

constexpr std::string_view kTaxonomyTemplate =
    R"(You will be given a list of reasoning segment nodes, each labeled
(e.g., N1, N2, ...), representing steps in a reasoning trace.

Your task has to strictly follow three steps:

First, analyze each node:
Carefully read all reasoning nodes and provide a brief analysis of each
node's function in the reasoning process.

Second, assign reasoning strategies:
Using the taxonomy provided below, identify the primary reasoning
strategy each node represents. Some longer nodes may involve multiple
strategies if so, also indicate a secondary strategy. If no secondary
applies, leave it as "None".

Finally, strictly format your output as JSONL as below:

{"id": "N1", "taxonomy_primary_type": "verification", "taxonomy_secondary_type": null}
{"id": "N2", "taxonomy_primary_type": "verification", "taxonomy_secondary_type": "Exploration"}

Reasoning Taxonomy

There are 5 types of reasoning strategies:

Backtracking:
The node revisits and modifies a previous step or assumption to correct
an error, resolve a conflict, or incorporate a new insight that alters
the reasoning path.

Verification:
The node tests or confirms the correctness of a specific claim,
assumption, or result without modifying the reasoning path.

Exploration:
The node proposes new hypotheses, possibilities, or approaches to the
problem in an open-ended manner, without committing to a definitive
solution.

Clarification:
The node rephrases, restates, or defines terms, assumptions, or problem
constraints to reduce ambiguity and enhance understanding.

Conclusion:
The node synthesizes prior reasoning to assert a final or intermediate
solution, judgment, or result.

Node:
)";

constexpr std::string_view kTreeTemplate =
    R"(You will be given a list of reasoning segment nodes, each labeled
(e.g., N1, N2, ...), representing steps in a mathematical reasoning
process.

Your task is to analyze the logical structure and organize these
segments step by step into an n-ary tree, where:

- Each node corresponds to one or more labels
  (e.g., "N1", or "N3, N4" if they share the same logical role).
- Labels must remain sequential. For example, N5 cannot be placed
  before N4.
- The tree reflects the hierarchical and sequential logic of the reasoning.
- Child nodes represent the logic going to the next level, such as
  supporting arguments, elaborations, or consequences.
- Sibling nodes represent logic staying at the same level.

Each time you add a node to the tree, you have three options:
A. Add as a sibling to one of the ancestor nodes of the current leaf node.
B. Add as a sibling to the current leaf node.
C. Add as a child of the current leaf node.

Provide your thought process and then give the tree.
Format the tree output as a structured JSON tree using only the node
labels do not include the original text.

Example tree format:
{
  "id": "1",
  "label": "N1",
  "children": [
    {
      "id": "1.1",
      "label": "N2",
      "children": [
        {"id": "1.1.1", "label": "N3"},
        {"id": "1.1.2", "label": "N4"}
      ]
    }
  ]
}

Nodes:
)";

// {0}: conclusion node list, {1}: question, {2}: correct answer, {3}: nodes.
constexpr std::string_view kJudgmentTemplate =
    R"(Task:
You are given a reasoning trace divided into nodes (e.g., N1, N2, ...).
Each node represents a step in the reasoning process.

You are also given a list of conclusion nodes: {0} identified by
their serial numbers.

For each conclusion node, do the following step by step:

1. Determine whether the conclusion node matches the Correct Answer.
   - If the conclusion exactly matches the Correct Answer, mark it as 1.
   - If it does not match, mark it as 0.

2. Determine the type of the conclusion node:
   - Intermediate Conclusion: a step that supports later reasoning but
     does not directly answer the question.
   - Answering Conclusion: a conclusion intended to answer the question,
     regardless of whether it is fully correct or ultimately the final answer.

3. Include the question and the Correct Answer:
   - Question: {1}
   - Correct Answer: {2}

4. Export the result in JSONL format, including the node id,
   correctness, and type. Example:

{{"conclusion_node": "N5", "is_correct": 0, "type": "Intermediate Conclusion"}}
{{"conclusion_node": "N10", "is_correct": 1, "type": "Answering Conclusion"}}
{{"conclusion_node": "N12", "is_correct": 1, "type": "Answering Conclusion"}}

Complete Nodes:
{3})";

std::string python_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "'" + items[i] + "'";
  }
  return out + "]";
}

}  // namespace

std::string render_node_list(const SourceNodeSequence& seq) {
  std::string out = "[";
  for (std::size_t i = 0; i < seq.nodes.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + seq.nodes[i].label + ": " + seq.nodes[i].text + "\"";
  }
  return out + "]";
}

std::vector<std::string> conclusion_nodes(const std::vector<TaxonomyLabel>& labels) {
  std::vector<std::string> out;
  for (const auto& l : labels) {
    if (l.primary == NodeType::Conclusion) out.push_back(l.node_label);
  }
  return out;
}

PromptRequest render_prompt(PromptKind kind, const ProblemRecord& problem,
                            const SourceNodeSequence& seq,
                            const std::vector<std::string>& conclusions) {
  if (seq.nodes.empty()) throw Error(ErrorCode::usage, "cannot render a prompt for an empty sequence");
  PromptRequest req;
  req.kind = kind;
  req.trace_id = seq.trace_id;
  std::string nodes = render_node_list(seq);
  switch (kind) {
    case PromptKind::taxonomy:
      req.rendered_prompt = std::string(kTaxonomyTemplate) + nodes;
      break;
    case PromptKind::tree:
      req.rendered_prompt = std::string(kTreeTemplate) + nodes;
      break;
    case PromptKind::judgment:
      if (conclusions.empty()) {
        throw Error(ErrorCode::no_conclusions,
                    fmt::format("trace '{}' has no Conclusion nodes to judge", seq.trace_id));
      }
      if (text::trim(problem.gold_answer).empty()) {
        throw Error(ErrorCode::usage, fmt::format("problem '{}' has no gold answer", problem.id));
      }
      req.rendered_prompt = fmt::format(fmt::runtime(kJudgmentTemplate), python_list(conclusions),
                                        problem.question, problem.gold_answer, nodes);
      break;
  }
  return req;
}

}  // namespace cotkit
