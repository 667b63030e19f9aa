#include "cotkit/selector.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "cotkit/parallel.hpp"
#include "cotkit/segmenter.hpp"

namespace cotkit {

std::string_view to_string(LengthRule r) {
  switch (r) {
    case LengthRule::median: return "median";
    case LengthRule::shortest: return "shortest";
    case LengthRule::longest: return "longest";
  }
  return "";
}

std::string_view to_string(TieBreak t) {
  return t == TieBreak::shorter ? "shorter" : "earlier_id";
}

LengthRule length_rule_from_string(std::string_view s) {
  if (s == "median") return LengthRule::median;
  if (s == "shortest") return LengthRule::shortest;
  if (s == "longest") return LengthRule::longest;
  throw Error(ErrorCode::usage, fmt::format("unknown length rule '{}'", s));
}

TieBreak tie_break_from_string(std::string_view s) {
  if (s == "shorter") return TieBreak::shorter;
  if (s == "earlier_id" || s == "earlier-id") return TieBreak::earlier_id;
  throw Error(ErrorCode::usage, fmt::format("unknown tie break '{}'", s));
}

void SelectorConfig::validate() const {
  if (k_candidates < 1) throw Error(ErrorCode::config, "k_candidates must be >= 1");
}

SelectorConfig SelectorConfig::from_json(const Json& j) {
  SelectorConfig c;
  if (!j.is_object()) throw Error(ErrorCode::config, "selector config must be a JSON object");
  try {
    if (j.contains("k_candidates")) c.k_candidates = j.at("k_candidates").get<int>();
    if (j.contains("length_rule")) c.length_rule = length_rule_from_string(j.at("length_rule").get<std::string>());
    if (j.contains("tie_break")) c.tie_break = tie_break_from_string(j.at("tie_break").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, fmt::format("bad selector config: {}", e.what()));
  }
  c.validate();
  return c;
}

Json SelectorConfig::to_json() const {
  return Json{{"k_candidates", k_candidates},
              {"length_rule", to_string(length_rule)},
              {"tie_break", to_string(tie_break)}};
}

std::vector<TraceRecord> best_of_k(const std::vector<TraceRecord>& candidates,
                                   const CanonicalAnswer& gold) {
  std::vector<TraceRecord> out;
  for (const auto& c : candidates) {
    auto answer = extract_answer(c.text);
    if (answer && answers_match(*answer, gold)) out.push_back(c);
  }
  return out;
}

TraceRecord select_intermediate(const std::vector<TraceRecord>& correct, const SelectorConfig& config,
                                const TokenCounter& counter) {
  if (correct.empty()) throw Error(ErrorCode::usage, "select_intermediate needs at least one candidate");
  struct Keyed {
    std::size_t tokens;
    const TraceRecord* rec;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(correct.size());
  for (const auto& r : correct) keyed.push_back({counter(r.text), &r});
  auto less = [&](const Keyed& a, const Keyed& b) {
    if (a.tokens != b.tokens) return a.tokens < b.tokens;
    if (config.tie_break == TieBreak::shorter && a.rec->text.size() != b.rec->text.size()) {
      return a.rec->text.size() < b.rec->text.size();
    }
    return a.rec->id < b.rec->id;
  };
  std::stable_sort(keyed.begin(), keyed.end(), less);
  std::size_t pick = 0;
  switch (config.length_rule) {
    case LengthRule::median:
      pick = (keyed.size() - 1) / 2;
      break;
    case LengthRule::shortest:
      pick = 0;
      break;
    case LengthRule::longest:
      pick = keyed.size() - 1;
      while (pick > 0 && keyed[pick - 1].tokens == keyed.back().tokens) --pick;
      break;
  }
  return *keyed[pick].rec;
}

std::vector<TraceRecord> filter_corpus(const std::vector<TraceRecord>& traces,
                                       const std::vector<ProblemRecord>& problems,
                                       const SelectorConfig& config, const TokenCounter& counter,
                                       std::size_t workers, FilterStats* stats) {
  config.validate();
  std::map<std::string, const ProblemRecord*> by_id;
  for (const auto& p : problems) by_id.emplace(p.id, &p);

  std::vector<std::string> order;
  std::map<std::string, std::vector<TraceRecord>> groups;
  std::set<std::string> missing;
  FilterStats local;
  for (const auto& t : traces) {
    if (!by_id.count(t.problem_id)) {
      missing.insert(t.problem_id);
      continue;
    }
    auto [it, fresh] = groups.try_emplace(t.problem_id);
    if (fresh) order.push_back(t.problem_id);
    if (it->second.size() >= static_cast<std::size_t>(config.k_candidates)) {
      ++local.truncated;
      continue;
    }
    it->second.push_back(t);
    ++local.candidates;
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::join, fmt::format("traces reference unknown problems: {}", list));
  }

  auto chosen = ordered_parallel_map(order, workers, [&](const std::string& pid) {
    CanonicalAnswer gold = normalize_answer(by_id.at(pid)->gold_answer);
    auto correct = best_of_k(groups.at(pid), gold);
    std::optional<TraceRecord> pick;
    if (!correct.empty()) pick = select_intermediate(correct, config, counter);
    return pick;
  });

  std::vector<TraceRecord> out;
  local.problems = order.size();
  for (auto& c : chosen) {
    if (c) {
      out.push_back(std::move(*c));
    } else {
      ++local.without_correct;
    }
  }
  if (stats) *stats = std::move(local);
  return out;
}

Json SftRecord::to_json() const {
  return Json{{"problem_id", problem_id},     {"trace_id", trace_id},
              {"prompt", prompt},             {"target", target},
              {"ecn_index", ecn_index},       {"original_tokens", original_tokens},
              {"pruned_tokens", pruned_tokens}};
}

Json SftSummary::to_json() const {
  return Json{{"count", count},
              {"mean_original_tokens", mean_original_tokens},
              {"mean_pruned_tokens", mean_pruned_tokens},
              {"mean_reduction_pct", mean_reduction_pct},
              {"token_scheme", to_string(token_scheme)}};
}

std::vector<SftRecord> build_sft(const std::vector<PrunedTrace>& pruned,
                                 const std::vector<ProblemRecord>& problems,
                                 const TokenCounter& counter) {
  std::map<std::string, const ProblemRecord*> by_id;
  for (const auto& p : problems) by_id.emplace(p.id, &p);
  std::set<std::string> dangling;
  std::vector<SftRecord> out;
  out.reserve(pruned.size());
  for (const auto& p : pruned) {
    auto it = by_id.find(p.seq.problem_id);
    if (it == by_id.end()) {
      dangling.insert(p.seq.trace_id + " -> " + (p.seq.problem_id.empty() ? "<none>" : p.seq.problem_id));
      continue;
    }
    SftRecord r;
    r.problem_id = p.seq.problem_id;
    r.trace_id = p.seq.trace_id;
    r.prompt = it->second->question;
    r.target = reassemble(p.seq);
    r.ecn_index = p.ecn_index;
    r.original_tokens = p.original_tokens;
    r.pruned_tokens = counter(r.target);
    out.push_back(std::move(r));
  }
  if (!dangling.empty()) {
    std::string list;
    for (const auto& d : dangling) list += (list.empty() ? "" : ", ") + d;
    throw Error(ErrorCode::join, fmt::format("pruned traces with unresolved problems: {}", list));
  }
  std::sort(out.begin(), out.end(), [](const SftRecord& a, const SftRecord& b) {
    return std::tie(a.problem_id, a.trace_id) < std::tie(b.problem_id, b.trace_id);
  });
  return out;
}

SftSummary summarize_sft(const std::vector<SftRecord>& records, TokenScheme scheme) {
  SftSummary s;
  s.token_scheme = scheme;
  s.count = records.size();
  if (records.empty()) return s;
  double orig = 0, pruned = 0, reduction = 0;
  for (const auto& r : records) {
    orig += static_cast<double>(r.original_tokens);
    pruned += static_cast<double>(r.pruned_tokens);
    if (r.original_tokens > 0) {
      reduction += 100.0 * (1.0 - static_cast<double>(r.pruned_tokens) / static_cast<double>(r.original_tokens));
    }
  }
  auto n = static_cast<double>(records.size());
  s.mean_original_tokens = orig / n;
  s.mean_pruned_tokens = pruned / n;
  s.mean_reduction_pct = reduction / n;
  return s;
}

}  // namespace cotkit
