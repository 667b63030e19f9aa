#include "cotkit/annotate.hpp"

#include <map>
#include <thread>

#include <fmt/format.h>

#include "cotkit/jsonl.hpp"
#include "cotkit/parallel.hpp"

namespace cotkit {

namespace {

Json diagnostic_json(const Diagnostic& d) {
  Json j{{"code", d.code}, {"message", d.message}};
  if (!d.location.empty()) j["location"] = d.location;
  if (d.severity == Severity::warning) j["severity"] = "warning";
  return j;
}

const std::vector<TaxonomyLabel>& labels_for(const AnnotationInput& in,
                                             std::vector<TaxonomyLabel>& scratch) {
  if (!in.labels.empty()) return in.labels;
  scratch = heuristic_labels(in.seq);
  return scratch;
}

// Judgment prompts without Conclusion nodes are never sent.
bool nothing_to_judge(const AnnotationInput& in, PromptKind kind) {
  return kind == PromptKind::judgment && conclusion_nodes(in.labels).empty();
}

AnnotationRecord empty_judgments(const AnnotationInput& in) {
  AnnotationRecord rec;
  rec.trace_id = in.seq.trace_id;
  rec.kind = PromptKind::judgment;
  rec.warnings.push_back("no Conclusion nodes; nothing to judge");
  return rec;
}

PromptRequest request_for(const AnnotationInput& in, PromptKind kind) {
  return render_prompt(kind, in.problem, in.seq, conclusion_nodes(in.labels));
}

AnnotationFailure failure_from(const std::string& trace_id, const Error& e) {
  AnnotationFailure f{trace_id, e.code(), e.what(), {}};
  if (auto* te = dynamic_cast<const TreeValidationError*>(&e)) f.diagnostics = te->report().diagnostics;
  return f;
}

struct Outcome {
  std::optional<AnnotationRecord> record;
  std::optional<AnnotationFailure> failure;
};

Outcome attempt(const std::string& trace_id, const std::function<AnnotationRecord()>& fn) {
  try {
    return {fn(), std::nullopt};
  } catch (const Error& e) {
    return {std::nullopt, failure_from(trace_id, e)};
  }
}

AnnotationResult collect(std::vector<Outcome> outcomes) {
  AnnotationResult result;
  for (auto& o : outcomes) {
    if (o.record) result.records.push_back(std::move(*o.record));
    if (o.failure) result.failures.push_back(std::move(*o.failure));
  }
  return result;
}

AnnotationResult run_export(const std::vector<AnnotationInput>& inputs, PromptKind kind,
                            const AnnotateOptions& options) {
  AnnotationResult result;
  JsonlWriter out(options.service.requests_path);
  for (const auto& in : inputs) {
    if (nothing_to_judge(in, kind)) continue;
    try {
      PromptRequest req = request_for(in, kind);
      out.write(Json{{"trace_id", req.trace_id}, {"kind", to_string(kind)}, {"prompt", req.rendered_prompt}});
      ++result.exported;
    } catch (const Error& e) {
      result.failures.push_back(failure_from(in.seq.trace_id, e));
    }
  }
  out.commit();
  return result;
}

AnnotationResult run_import(const std::vector<AnnotationInput>& inputs, PromptKind kind,
                            const AnnotateOptions& options, std::size_t workers) {
  std::map<std::string, std::string> responses;
  std::map<std::string, int> seen;
  JsonlReader reader(options.service.responses_path);
  while (auto rec = reader.next()) {
    if (!rec->is_object() || !rec->contains("trace_id") || !(*rec)["trace_id"].is_string() ||
        !rec->contains("text") || !(*rec)["text"].is_string()) {
      throw Error(ErrorCode::parse, fmt::format("{}:{}: response record needs string trace_id and text",
                                                reader.path(), reader.line()));
    }
    std::string id = (*rec)["trace_id"].get<std::string>();
    ++seen[id];
    responses.emplace(id, (*rec)["text"].get<std::string>());
  }
  return collect(ordered_parallel_map(inputs, workers, [&](const AnnotationInput& in) {
    const std::string& id = in.seq.trace_id;
    return attempt(id, [&] {
      if (nothing_to_judge(in, kind)) return empty_judgments(in);
      auto it = responses.find(id);
      if (it == responses.end()) {
        throw Error(ErrorCode::not_found, fmt::format("no response for trace '{}'", id));
      }
      if (seen[id] > 1) {
        throw Error(ErrorCode::duplicate, fmt::format("{} responses for trace '{}'", seen.at(id), id));
      }
      return parse_annotation(in, kind, it->second, options);
    });
  }));
}

AnnotationResult run_live(const std::vector<AnnotationInput>& inputs, PromptKind kind,
                          const AnnotateOptions& options) {
  std::unique_ptr<CompletionService> owned;
  CompletionService* client = options.client;
  if (client == nullptr) {
    owned = make_http_service(options.service);
    client = owned.get();
  }
  SleepFn sleep = options.sleep ? options.sleep
                                : SleepFn([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); });
  auto workers = static_cast<std::size_t>(options.service.max_concurrent);
  return collect(ordered_parallel_map(inputs, workers, [&](const AnnotationInput& in) {
    return attempt(in.seq.trace_id, [&] {
      if (nothing_to_judge(in, kind)) return empty_judgments(in);
      PromptRequest req = request_for(in, kind);
      std::string text = complete_with_retry(*client, req, options.service.retry, sleep);
      return parse_annotation(in, kind, std::move(text), options);
    });
  }));
}

AnnotationResult run_heuristic(const std::vector<AnnotationInput>& inputs, PromptKind kind,
                               const AnnotateOptions& options) {
  auto workers = static_cast<std::size_t>(options.service.max_concurrent);
  return collect(ordered_parallel_map(inputs, workers, [&](const AnnotationInput& in) {
    return attempt(in.seq.trace_id, [&] {
      if (nothing_to_judge(in, kind)) return empty_judgments(in);
      std::vector<TaxonomyLabel> scratch;
      const auto& labels = labels_for(in, scratch);
      std::string text = heuristic_response(kind, in.seq, labels, in.problem);
      return parse_annotation(in, kind, std::move(text), options);
    });
  }));
}

}  // namespace

Json AnnotationRecord::to_json() const {
  Json j{{"trace_id", trace_id}};
  switch (kind) {
    case PromptKind::taxonomy: {
      Json arr = Json::array();
      for (const auto& l : labels) arr.push_back(cotkit::to_json(l));
      j["labels"] = std::move(arr);
      break;
    }
    case PromptKind::tree:
      if (!tree) return Json{{"trace_id", trace_id}, {"text", response}};
      j["tree"] = tree->to_json();
      break;
    case PromptKind::judgment: {
      Json arr = Json::array();
      for (const auto& c : judgments) arr.push_back(cotkit::to_json(c));
      j["judgments"] = std::move(arr);
      break;
    }
  }
  if (!response.empty()) j["response"] = response;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

Json AnnotationFailure::to_json() const {
  Json j{{"trace_id", trace_id}, {"error", to_string(code)}, {"message", message}};
  if (!diagnostics.empty()) {
    Json arr = Json::array();
    for (const auto& d : diagnostics) arr.push_back(diagnostic_json(d));
    j["diagnostics"] = std::move(arr);
  }
  return j;
}

AnnotationRecord parse_annotation(const AnnotationInput& input, PromptKind kind, std::string response,
                                  const AnnotateOptions& options) {
  const bool strict = options.strict;
  AnnotationRecord rec;
  rec.trace_id = input.seq.trace_id;
  rec.kind = kind;
  int m = static_cast<int>(input.seq.length());
  switch (kind) {
    case PromptKind::taxonomy:
      rec.labels = parse_taxonomy_labels(response, m, {strict});
      break;
    case PromptKind::tree: {
      if (!options.parse_trees) break;
      TreeParseOptions opts;
      opts.strict = strict;
      opts.repair = options.repair;
      opts.source_count = m;
      GroupedTree tree = parse_tree(response, opts);
      tree.set_trace_id(rec.trace_id);
      for (const auto& d : validate_tree(tree, m).diagnostics) {
        if (d.severity == Severity::warning) rec.warnings.push_back(d.code + ": " + d.message);
      }
      rec.tree = std::move(tree);
      break;
    }
    case PromptKind::judgment:
      rec.judgments = parse_conclusion_judgments(response, {strict}, &rec.warnings);
      break;
  }
  rec.response = std::move(response);
  return rec;
}

AnnotationResult annotate(const std::vector<AnnotationInput>& inputs, PromptKind kind,
                          const AnnotateOptions& options) {
  options.service.validate();
  auto workers = static_cast<std::size_t>(options.service.max_concurrent);
  switch (options.service.mode) {
    case ServiceMode::batch_export: return run_export(inputs, kind, options);
    case ServiceMode::batch_import: return run_import(inputs, kind, options, workers);
    case ServiceMode::live: return run_live(inputs, kind, options);
    case ServiceMode::heuristic: return run_heuristic(inputs, kind, options);
  }
  return {};
}

}  // namespace cotkit
