#include "cotkit/stages.hpp"

#include <map>

#include <fmt/format.h>

#include "cotkit/jsonl.hpp"
#include "cotkit/metrics.hpp"
#include "cotkit/parallel.hpp"

namespace cotkit {

namespace {

constexpr std::size_t kChunk = 512;

struct Numbered {
  std::size_t line = 0;
  Json value;
};

// Per-record result: at most one primary record and one failure record.
struct Emit {
  std::optional<Json> out;
  std::optional<Json> failure;
};

std::string default_failures(const std::string& out) {
  std::string base = out;
  if (base.size() > 6 && base.compare(base.size() - 6, 6, ".jsonl") == 0) base.resize(base.size() - 6);
  return base + ".failures.jsonl";
}

Json failure_json(const std::string& trace_id, ErrorCode code, const std::string& message) {
  return Json{{"trace_id", trace_id}, {"error", to_string(code)}, {"message", message}};
}

std::string where(const std::string& path, std::size_t line) { return fmt::format("{}:{}", path, line); }

// Streams `in` in chunks, maps each chunk on the worker pool and writes the
// results in input order.
template <typename Fn>
void stream_map(const StageContext& ctx, const std::string& in, JsonlWriter& out, JsonlWriter* failures,
                StageStats& stats, Fn fn) {
  JsonlReader reader(in);
  std::vector<Numbered> chunk;
  auto flush = [&] {
    auto results = ordered_parallel_map(chunk, ctx.workers, fn);
    for (auto& r : results) {
      if (r.out) {
        out.write(*r.out);
        ++stats.written;
      }
      if (r.failure) {
        ++stats.failed;
        if (failures) failures->write(*r.failure);
      }
    }
    chunk.clear();
  };
  while (auto rec = reader.next()) {
    chunk.push_back({reader.line(), std::move(*rec)});
    ++stats.read;
    if (chunk.size() >= kChunk) flush();
  }
  if (!chunk.empty()) flush();
}

template <typename T>
std::map<std::string, T> index_by_trace(const std::string& path, const std::function<T(const Json&)>& parse,
                                        const std::function<std::string(const T&)>& key) {
  std::map<std::string, T> out;
  JsonlReader reader(path);
  while (auto rec = reader.next()) {
    T value;
    try {
      value = parse(*rec);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: {}", where(path, reader.line()), e.what()));
    }
    std::string id = key(value);
    if (!out.emplace(id, std::move(value)).second) {
      throw Error(ErrorCode::duplicate, fmt::format("{}: duplicate record for '{}'", where(path, reader.line()), id));
    }
  }
  return out;
}

std::map<std::string, ProblemRecord> load_problems(const std::string& path) {
  return index_by_trace<ProblemRecord>(path, problem_from_json, [](const ProblemRecord& p) { return p.id; });
}

std::map<std::string, LabelSet> load_labels(const std::string& path) {
  return index_by_trace<LabelSet>(path, label_set_from_json, [](const LabelSet& s) { return s.trace_id; });
}

std::map<std::string, JudgmentSet> load_judgments(const std::string& path) {
  return index_by_trace<JudgmentSet>(path, judgment_set_from_json, [](const JudgmentSet& s) { return s.trace_id; });
}

void note(const StageContext& ctx, const std::string& msg) {
  if (ctx.log) ctx.log(msg);
}

}  // namespace

Json StageStats::to_json() const {
  Json j{{"read", read}, {"written", written}, {"failed", failed}};
  for (auto& [k, v] : details.items()) j[k] = v;
  return j;
}

StageStats segment_stage(const StageContext& ctx, const std::string& traces, const std::string& out,
                         const SegmenterConfig& config) {
  config.validate();
  StageStats stats;
  JsonlWriter writer(out);
  JsonlWriter failures(default_failures(out));
  std::size_t nodes = 0;
  stream_map(ctx, traces, writer, &failures, stats, [&](const Numbered& rec) {
    Emit e;
    std::string id = rec.value.is_object() ? rec.value.value("id", std::string()) : std::string();
    try {
      TraceRecord t = trace_from_json(rec.value);
      SourceNodeSequence seq = segment(t.text, config, t.id);
      seq.problem_id = t.problem_id;
      e.out = to_json(seq);
    } catch (const Error& err) {
      e.failure = failure_json(id, err.code(), fmt::format("{}: {}", where(traces, rec.line), err.what()));
    }
    return e;
  });
  writer.commit();
  failures.commit();
  {
    JsonlReader reader(out);
    while (auto rec = reader.next()) nodes += (*rec)["nodes"].size();
  }
  stats.details["nodes"] = nodes;
  note(ctx, fmt::format("segment: {} traces -> {} nodes ({} failed)", stats.written, nodes, stats.failed));
  return stats;
}

StageStats filter_stage(const StageContext& ctx, const std::string& traces, const std::string& problems,
                        const std::string& out, const SelectorConfig& config) {
  StageStats stats;
  auto trace_list = read_all<TraceRecord>(traces, trace_from_json);
  auto problem_list = read_all<ProblemRecord>(problems, problem_from_json);
  FilterStats fs;
  auto kept = filter_corpus(trace_list, problem_list, config, ctx.tokens, ctx.workers, &fs);
  JsonlWriter writer(out);
  for (const auto& t : kept) writer.write(to_json(t));
  writer.commit();
  stats.read = trace_list.size();
  stats.written = kept.size();
  stats.details = Json{{"problems", fs.problems},
                       {"candidates", fs.candidates},
                       {"beyond_k", fs.truncated},
                       {"problems_without_correct", fs.without_correct},
                       {"selector", config.to_json()},
                       {"token_scheme", to_string(ctx.tokens.scheme())}};
  note(ctx, fmt::format("filter: {} candidates over {} problems -> {} kept", fs.candidates, fs.problems, kept.size()));
  return stats;
}

StageStats annotate_stage(const StageContext& ctx, PromptKind kind, const AnnotatePaths& paths,
                          AnnotateOptions options) {
  StageStats stats;
  if (options.service.mode == ServiceMode::batch_export && options.service.requests_path.empty()) {
    options.service.requests_path = paths.out;
  }
  if (options.service.mode == ServiceMode::heuristic) {
    options.service.max_concurrent = static_cast<int>(std::max<std::size_t>(1, ctx.workers));
  }
  if (kind == PromptKind::tree) options.parse_trees = false;
  if (kind == PromptKind::judgment && (paths.problems.empty() || paths.labels.empty())) {
    throw Error(ErrorCode::usage, "judgment annotation needs --problems and --labels");
  }
  options.service.validate();

  std::map<std::string, ProblemRecord> problems;
  if (!paths.problems.empty()) problems = load_problems(paths.problems);
  std::map<std::string, LabelSet> labels;
  if (!paths.labels.empty()) labels = load_labels(paths.labels);

  std::vector<AnnotationInput> inputs;
  std::vector<AnnotationFailure> early;
  JsonlReader reader(paths.nodes);
  while (auto rec = reader.next()) {
    ++stats.read;
    AnnotationInput in;
    try {
      in.seq = nodes_from_json(*rec);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: {}", where(paths.nodes, reader.line()), e.what()));
    }
    if (auto it = problems.find(in.seq.problem_id); it != problems.end()) {
      in.problem = it->second;
    } else if (kind == PromptKind::judgment) {
      early.push_back({in.seq.trace_id, ErrorCode::join,
                       fmt::format("problem '{}' not found", in.seq.problem_id), {}});
      continue;
    }
    if (auto it = labels.find(in.seq.trace_id); it != labels.end()) {
      in.labels = it->second.labels;
    } else if (kind == PromptKind::judgment) {
      early.push_back({in.seq.trace_id, ErrorCode::not_found, "no taxonomy labels for trace", {}});
      continue;
    }
    inputs.push_back(std::move(in));
  }

  AnnotationResult result = annotate(inputs, kind, options);
  result.failures.insert(result.failures.begin(), early.begin(), early.end());
  std::string failures_path = paths.failures.empty() ? default_failures(paths.out) : paths.failures;
  JsonlWriter failures(failures_path);
  for (const auto& f : result.failures) failures.write(f.to_json());
  failures.commit();
  stats.failed = result.failures.size();

  if (options.service.mode == ServiceMode::batch_export) {
    stats.written = result.exported;
    stats.details["requests"] = options.service.requests_path;
    note(ctx, fmt::format("annotate {}: exported {} requests to {}", to_string(kind), result.exported,
                          options.service.requests_path));
    return stats;
  }
  JsonlWriter writer(paths.out);
  for (const auto& r : result.records) writer.write(r.to_json());
  writer.commit();
  stats.written = result.records.size();
  stats.details["mode"] = to_string(options.service.mode);
  note(ctx, fmt::format("annotate {}: {} annotated, {} failed", to_string(kind), stats.written, stats.failed));
  return stats;
}

StageStats tree_stage(const StageContext& ctx, const std::string& responses, const std::string& nodes,
                      const std::string& out, const std::string& failures_path, bool strict, bool repair) {
  StageStats stats;
  std::map<std::string, int> lengths;
  if (!nodes.empty()) {
    JsonlReader reader(nodes);
    while (auto rec = reader.next()) {
      SourceNodeSequence seq = nodes_from_json(*rec);
      lengths[seq.trace_id] = static_cast<int>(seq.length());
    }
  }
  JsonlWriter writer(out);
  JsonlWriter failures(failures_path.empty() ? default_failures(out) : failures_path);
  stream_map(ctx, responses, writer, &failures, stats, [&](const Numbered& rec) {
    Emit e;
    const Json& j = rec.value;
    std::string id = j.is_object() && j.contains("trace_id") && j["trace_id"].is_string()
                         ? j["trace_id"].get<std::string>()
                         : std::string();
    try {
      if (id.empty()) throw Error(ErrorCode::parse, "record lacks a string 'trace_id'");
      TreeParseOptions opts;
      opts.strict = strict;
      opts.repair = repair;
      if (auto it = lengths.find(id); it != lengths.end()) {
        opts.source_count = it->second;
      } else if (!nodes.empty()) {
        throw Error(ErrorCode::join, fmt::format("trace '{}' is not in {}", id, nodes));
      }
      GroupedTree tree;
      if (j.contains("tree")) {
        tree = parse_tree(j["tree"], opts);
      } else if (j.contains("text") && j["text"].is_string()) {
        tree = parse_tree(j["text"].get<std::string>(), opts);
      } else {
        throw Error(ErrorCode::parse, "record needs 'text' or 'tree'");
      }
      tree.set_trace_id(id);
      Json outj{{"trace_id", id}, {"tree", tree.to_json()}};
      int m = 0;
      for (const auto& n : tree.nodes()) {
        for (int l : n.labels) m = std::max(m, l);
      }
      std::vector<std::string> warnings;
      for (const auto& d : validate_tree(tree, opts.source_count.value_or(std::max(m, 1))).diagnostics) {
        if (d.severity == Severity::warning) warnings.push_back(d.code + ": " + d.message);
      }
      if (!warnings.empty()) outj["warnings"] = warnings;
      e.out = std::move(outj);
    } catch (const TreeValidationError& err) {
      AnnotationFailure f{id, err.code(), err.what(), err.report().diagnostics};
      e.failure = f.to_json();
    } catch (const Error& err) {
      e.failure = failure_json(id, err.code(), fmt::format("{}: {}", where(responses, rec.line), err.what()));
    }
    return e;
  });
  writer.commit();
  failures.commit();
  note(ctx, fmt::format("tree: {} trees, {} rejected", stats.written, stats.failed));
  return stats;
}

Json pruned_record(const SourceNodeSequence& pruned, const EcnResult& result, std::size_t original_length,
                   std::size_t original_tokens, std::size_t pruned_tokens) {
  Json j{{"trace_id", pruned.trace_id}};
  if (!pruned.problem_id.empty()) j["problem_id"] = pruned.problem_id;
  j["ecn_index"] = *result.ecn_index;
  j["original_length"] = original_length;
  j["pruned_length"] = pruned.length();
  j["original_tokens"] = original_tokens;
  j["pruned_tokens"] = pruned_tokens;
  j["correct_set"] = result.correct_set;
  j["conflicts"] = result.conflicts;
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  j["nodes"] = to_json(pruned)["nodes"];
  return j;
}

PrunedTrace pruned_from_json(const Json& j) {
  PrunedTrace p;
  p.seq = nodes_from_json(j);
  try {
    p.ecn_index = j.at("ecn_index").get<int>();
    p.original_tokens = j.at("original_tokens").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, fmt::format("bad pruned record: {}", e.what()));
  }
  return p;
}

StageStats ecn_stage(const StageContext& ctx, const EcnPaths& paths) {
  StageStats stats;
  auto problems = load_problems(paths.problems);
  auto labels = load_labels(paths.labels);
  std::map<std::string, JudgmentSet> judgments;
  if (!paths.judgments.empty()) judgments = load_judgments(paths.judgments);

  JsonlWriter writer(paths.out);
  JsonlWriter quarantine(paths.quarantine);
  std::size_t conflicts = 0;
  std::size_t excluded = 0;
  stream_map(ctx, paths.nodes, writer, &quarantine, stats, [&](const Numbered& rec) {
    Emit e;
    SourceNodeSequence seq;
    try {
      seq = nodes_from_json(rec.value);
    } catch (const Error& err) {
      throw Error(err.code(), fmt::format("{}: {}", where(paths.nodes, rec.line), err.what()));
    }
    auto quarantined = [&](std::string reason, std::string message, const EcnResult* r) {
      Json q{{"trace_id", seq.trace_id}};
      if (!seq.problem_id.empty()) q["problem_id"] = seq.problem_id;
      q["reason"] = std::move(reason);
      q["message"] = std::move(message);
      q["correct_set"] = r ? Json(r->correct_set) : Json::array();
      if (r) {
        q["conflicts"] = r->conflicts;
        if (!r->warnings.empty()) q["warnings"] = r->warnings;
      }
      e.failure = std::move(q);
    };
    auto p = problems.find(seq.problem_id);
    if (p == problems.end()) {
      quarantined("JOIN", fmt::format("problem '{}' not found", seq.problem_id), nullptr);
      return e;
    }
    auto l = labels.find(seq.trace_id);
    if (l == labels.end()) {
      quarantined("NOT_FOUND", "no taxonomy labels for trace", nullptr);
      return e;
    }
    static const std::vector<ConclusionJudgment> none;
    auto jt = judgments.find(seq.trace_id);
    const auto& js = jt == judgments.end() ? none : jt->second.judgments;
    try {
      EcnResult r = find_ecn(seq, l->second.labels, js, normalize_answer(p->second.gold_answer));
      if (r.status == EcnStatus::excluded) {
        quarantined("NO_CORRECT_CONCLUSION", "no correct answering conclusion", &r);
        return e;
      }
      SourceNodeSequence pr = prune(seq, *r.ecn_index);
      e.out = pruned_record(pr, r, seq.length(), ctx.tokens(reassemble(seq)), ctx.tokens(reassemble(pr)));
    } catch (const Error& err) {
      quarantined(std::string(to_string(err.code())), err.what(), nullptr);
    }
    return e;
  });
  writer.commit();
  quarantine.commit();
  {
    JsonlReader reader(paths.out);
    while (auto rec = reader.next()) conflicts += (*rec)["conflicts"].get<std::size_t>();
    JsonlReader q(paths.quarantine);
    while (auto rec = q.next()) {
      if ((*rec)["reason"] == "NO_CORRECT_CONCLUSION") ++excluded;
    }
  }
  stats.details = Json{{"pruned", stats.written}, {"quarantined", stats.failed},
                       {"no_correct_conclusion", excluded}, {"conflicts", conflicts}};
  note(ctx, fmt::format("ecn: {} pruned, {} quarantined ({} without a correct conclusion), {} conflicts",
                        stats.written, stats.failed, excluded, conflicts));
  return stats;
}

std::string sft_summary_path(const std::string& sft_path) {
  std::string base = sft_path;
  if (base.size() > 6 && base.compare(base.size() - 6, 6, ".jsonl") == 0) base.resize(base.size() - 6);
  return base + ".summary.json";
}

StageStats export_sft_stage(const StageContext& ctx, const std::string& pruned, const std::string& problems,
                            const std::string& out) {
  StageStats stats;
  auto traces = read_all<PrunedTrace>(pruned, pruned_from_json);
  auto problem_list = read_all<ProblemRecord>(problems, problem_from_json);
  auto records = build_sft(traces, problem_list, ctx.tokens);
  JsonlWriter writer(out);
  for (const auto& r : records) writer.write(r.to_json());
  writer.commit();
  SftSummary summary = summarize_sft(records, ctx.tokens.scheme());
  write_text_file(sft_summary_path(out), summary.to_json().dump(2) + "\n");
  stats.read = traces.size();
  stats.written = records.size();
  stats.details["summary"] = summary.to_json();
  note(ctx, fmt::format("export-sft: {} records, mean tokens {:.2f} -> {:.2f} ({:.2f}% reduction)", summary.count,
                        summary.mean_original_tokens, summary.mean_pruned_tokens, summary.mean_reduction_pct));
  return stats;
}

StageStats metrics_stage(const StageContext& ctx, const std::string& trees, const std::string& nodes,
                         const std::string& labels, const std::string& out) {
  StageStats stats;
  std::map<std::string, GroupedTree> tree_map;
  if (!trees.empty()) {
    JsonlReader reader(trees);
    while (auto rec = reader.next()) {
      try {
        std::string id = rec->at("trace_id").get<std::string>();
        GroupedTree t = tree_from_json(rec->at("tree"));
        t.set_trace_id(id);
        tree_map[id] = std::move(t);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, fmt::format("{}: {}", where(trees, reader.line()), e.what()));
      }
    }
  }
  std::map<std::string, LabelSet> label_map;
  if (!labels.empty()) label_map = load_labels(labels);

  JsonlWriter writer(out);
  stream_map(ctx, nodes, writer, nullptr, stats, [&](const Numbered& rec) {
    Emit e;
    SourceNodeSequence seq = nodes_from_json(rec.value);
    TraceMetrics m;
    m.trace_id = seq.trace_id;
    m.problem_id = seq.problem_id;
    m.source_nodes = static_cast<int>(seq.length());
    m.tokens = ctx.tokens(reassemble(seq));
    const GroupedTree* tree = nullptr;
    if (auto it = tree_map.find(seq.trace_id); it != tree_map.end() && !it->second.empty()) {
      tree = &it->second;
      m.morphology = morphology(*tree);
    }
    m.boundary = answer_boundary(seq, tree);
    if (auto it = label_map.find(seq.trace_id); it != label_map.end() && !it->second.labels.empty()) {
      m.node_types = node_type_distribution(it->second.labels);
    }
    e.out = m.to_json();
    return e;
  });
  writer.commit();
  note(ctx, fmt::format("metrics: {} traces", stats.written));
  return stats;
}

StageStats report_stage(const StageContext& ctx, const ReportPaths& paths, const BootstrapConfig& bootstrap,
                        const std::string& base_method) {
  StageStats stats;
  ReportInputs in;
  in.metrics = read_all<TraceMetrics>(paths.metrics, trace_metrics_from_json);
  if (!paths.baseline.empty()) in.baseline = read_all<TraceMetrics>(paths.baseline, trace_metrics_from_json);
  if (!paths.results.empty()) in.results = read_all<QuestionResult>(paths.results, question_result_from_json);
  in.base_method = base_method;
  in.bootstrap = bootstrap;
  in.token_scheme = ctx.tokens.scheme();
  in.workers = ctx.workers;
  emit_report(in, paths.out_dir);
  stats.read = in.metrics.size();
  stats.written = report_files(!in.results.empty()).size();
  stats.details["seed"] = bootstrap.seed;
  note(ctx, fmt::format("report: {} traces -> {} (seed {})", in.metrics.size(), paths.out_dir, bootstrap.seed));
  return stats;
}

}  // namespace cotkit
