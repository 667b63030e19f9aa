#include "cotkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "cotkit/parallel.hpp"

namespace cotkit {

void BootstrapConfig::validate() const {
  if (resamples < 1) throw Error(ErrorCode::config, "bootstrap resamples must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::config, "bootstrap level must lie in (0, 1)");
}

BootstrapConfig BootstrapConfig::from_json(const Json& j) {
  BootstrapConfig c;
  if (!j.is_object()) throw Error(ErrorCode::config, "bootstrap config must be a JSON object");
  try {
    if (j.contains("resamples")) c.resamples = j.at("resamples").get<int>();
    if (j.contains("level")) c.level = j.at("level").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, fmt::format("bad bootstrap config: {}", e.what()));
  }
  c.validate();
  return c;
}

Json BootstrapConfig::to_json() const {
  return Json{{"resamples", resamples}, {"level", level}, {"seed", seed}};
}

std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::usage, "bounded_draw over an empty range");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;  // largest multiple of n, minus one
  for (;;) {
    std::uint64_t x = gen();
    if (x <= limit) return x % n;
  }
}

std::vector<double> bootstrap_means(const std::vector<double>& samples, const BootstrapConfig& config,
                                    std::size_t workers) {
  config.validate();
  if (samples.empty()) throw Error(ErrorCode::usage, "bootstrap over an empty sample");
  const std::size_t n = samples.size();
  std::vector<std::uint32_t> index(static_cast<std::size_t>(config.resamples));
  for (std::size_t b = 0; b < index.size(); ++b) index[b] = static_cast<std::uint32_t>(b);

  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (*lo == *hi) return std::vector<double>(index.size(), *lo);

  return ordered_parallel_map(index, workers, [&](std::uint32_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32), b};
    std::mt19937_64 gen(seq);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += samples[bounded_draw(gen, n)];
    return sum / static_cast<double>(n);
  });
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::usage, "quantile of empty data");
  p = std::clamp(p, 0.0, 1.0);
  double h = static_cast<double>(sorted.size() - 1) * p;
  auto k = static_cast<std::size_t>(std::floor(h));
  if (k + 1 >= sorted.size()) return sorted.back();
  return sorted[k] + (h - static_cast<double>(k)) * (sorted[k + 1] - sorted[k]);
}

Interval bootstrap_ci(const std::vector<double>& samples, const BootstrapConfig& config,
                      std::size_t workers) {
  std::vector<double> means = bootstrap_means(samples, config, workers);
  std::sort(means.begin(), means.end());
  double alpha = 1.0 - config.level;
  return {quantile_sorted(means, alpha / 2.0), quantile_sorted(means, 1.0 - alpha / 2.0)};
}

QuestionResult question_result_from_json(const Json& j) {
  QuestionResult r;
  try {
    r.method = j.at("method").get<std::string>();
    r.question_id = j.at("question_id").get<std::string>();
    auto flag = parse_flag(j.at("correct"));
    if (!flag) throw Error(ErrorCode::parse, "'correct' must be 0/1 or a boolean");
    r.correct = *flag;
    r.tokens = j.at("tokens").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, fmt::format("bad result record: {}", e.what()));
  }
  return r;
}

Json SummaryRow::to_json() const {
  Json j{{"method", method},
         {"questions", questions},
         {"accuracy", accuracy},
         {"accuracy_delta", accuracy_delta},
         {"mean_tokens", mean_tokens},
         {"token_delta_pct", token_delta_pct}};
  if (accuracy_ci) j["accuracy_ci"] = {accuracy_ci->lo, accuracy_ci->hi};
  if (tokens_ci) j["tokens_ci"] = {tokens_ci->lo, tokens_ci->hi};
  return j;
}

SummaryRow summary_from_means(std::string method, double accuracy, double mean_tokens, double base_accuracy,
                              double base_mean_tokens) {
  SummaryRow row;
  row.method = std::move(method);
  row.accuracy = accuracy;
  row.mean_tokens = mean_tokens;
  row.accuracy_delta = accuracy - base_accuracy;
  row.token_delta_pct = base_mean_tokens == 0 ? 0.0 : 100.0 * (mean_tokens - base_mean_tokens) / base_mean_tokens;
  return row;
}

std::vector<SummaryRow> corpus_summary(const std::vector<QuestionResult>& results,
                                       const std::string& base_method,
                                       const std::optional<BootstrapConfig>& bootstrap) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, const QuestionResult*>> by_method;
  for (const auto& r : results) {
    auto [it, fresh] = by_method.try_emplace(r.method);
    if (fresh) order.push_back(r.method);
    if (!it->second.emplace(r.question_id, &r).second) {
      throw Error(ErrorCode::duplicate,
                  fmt::format("method '{}' answers question '{}' twice", r.method, r.question_id));
    }
  }
  auto base = by_method.find(base_method);
  if (base == by_method.end()) {
    throw Error(ErrorCode::join, fmt::format("base method '{}' has no results", base_method));
  }
  std::set<std::string> questions;
  for (const auto& [q, _] : base->second) questions.insert(q);
  for (const auto& [method, rows] : by_method) {
    std::set<std::string> mine;
    for (const auto& [q, _] : rows) mine.insert(q);
    if (mine != questions) {
      throw Error(ErrorCode::join,
                  fmt::format("method '{}' covers a different question set than '{}'", method, base_method));
    }
  }

  auto means = [&](const std::string& method, std::vector<double>* acc, std::vector<double>* tok) {
    for (const auto& [q, r] : by_method.at(method)) {
      acc->push_back(r->correct ? 1.0 : 0.0);
      tok->push_back(r->tokens);
    }
  };
  auto mean = [](const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
  };

  std::vector<double> base_acc, base_tok;
  means(base_method, &base_acc, &base_tok);
  double ba = mean(base_acc), bt = mean(base_tok);

  std::vector<SummaryRow> rows;
  for (const auto& method : order) {
    std::vector<double> acc, tok;
    means(method, &acc, &tok);
    SummaryRow row = summary_from_means(method, mean(acc), mean(tok), ba, bt);
    row.questions = acc.size();
    if (bootstrap) {
      row.accuracy_ci = bootstrap_ci(acc, *bootstrap);
      row.tokens_ci = bootstrap_ci(tok, *bootstrap);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DeltaRow> delta_from_means(const std::array<double, 12>& mean_a, const std::array<double, 12>& mean_b) {
  std::vector<DeltaRow> rows;
  for (std::size_t i = 0; i < kMorphologyMetrics.size(); ++i) {
    rows.push_back({kMorphologyMetrics[i].key, kMorphologyMetrics[i].title, mean_a[i], mean_b[i],
                    mean_a[i] - mean_b[i]});
  }
  return rows;
}

std::array<double, 12> morphology_means(const std::vector<MorphologyReport>& reports) {
  std::array<double, 12> sums{};
  for (const auto& r : reports) {
    auto v = metric_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) sums[i] += v[i];
  }
  if (!reports.empty()) {
    for (double& s : sums) s /= static_cast<double>(reports.size());
  }
  return sums;
}

std::vector<DeltaRow> morphology_delta(const std::vector<MorphologyReport>& a,
                                       const std::vector<MorphologyReport>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::usage, "morphology delta needs two non-empty corpora");
  return delta_from_means(morphology_means(a), morphology_means(b));
}

double agreement_rate(const std::vector<TaxonomyLabel>& a, const std::vector<TaxonomyLabel>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::join, fmt::format("label lists differ in length ({} vs {})", a.size(), b.size()));
  }
  if (a.empty()) throw Error(ErrorCode::usage, "agreement rate of empty label lists");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].node_label != b[i].node_label) {
      throw Error(ErrorCode::join,
                  fmt::format("position {}: {} vs {}", i + 1, a[i].node_label, b[i].node_label));
    }
    if (a[i].primary == b[i].primary) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace cotkit
