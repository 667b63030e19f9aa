#include "cotkit/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

namespace cotkit {

std::string_view to_string(ServiceMode m) {
  switch (m) {
    case ServiceMode::live: return "live";
    case ServiceMode::batch_export: return "batch-export";
    case ServiceMode::batch_import: return "batch-import";
    case ServiceMode::heuristic: return "heuristic";
  }
  return "";
}

ServiceMode service_mode_from_string(std::string_view s) {
  if (s == "live") return ServiceMode::live;
  if (s == "batch-export" || s == "batch_export") return ServiceMode::batch_export;
  if (s == "batch-import" || s == "batch_import") return ServiceMode::batch_import;
  if (s == "heuristic") return ServiceMode::heuristic;
  throw Error(ErrorCode::usage, fmt::format("unknown annotation mode '{}'", s));
}

std::chrono::milliseconds backoff_delay(int attempt, const RetryPolicy& policy) {
  long long delay = policy.backoff_base_ms;
  for (int i = 1; i < attempt && delay < policy.max_backoff_ms; ++i) delay *= 2;
  return std::chrono::milliseconds(std::min<long long>(delay, policy.max_backoff_ms));
}

void ServiceConfig::validate() const {
  if (max_concurrent < 1) throw Error(ErrorCode::config, "max_concurrent must be >= 1");
  if (retry.max_attempts < 1) throw Error(ErrorCode::config, "retry.max_attempts must be >= 1");
  if (retry.backoff_base_ms < 0) throw Error(ErrorCode::config, "retry.backoff_base_ms must be >= 0");
  switch (mode) {
    case ServiceMode::live:
      if (endpoint.empty()) throw Error(ErrorCode::config, "live mode requires an endpoint");
      if (auth_env_var.empty()) throw Error(ErrorCode::config, "live mode requires auth_env_var");
      break;
    case ServiceMode::batch_export:
      if (requests_path.empty()) throw Error(ErrorCode::config, "batch-export requires a requests file path");
      break;
    case ServiceMode::batch_import:
      if (responses_path.empty()) throw Error(ErrorCode::config, "batch-import requires a responses file path");
      break;
    case ServiceMode::heuristic:
      break;
  }
}

ServiceConfig ServiceConfig::from_json(const Json& j) {
  ServiceConfig c;
  if (!j.is_object()) throw Error(ErrorCode::config, "service config must be a JSON object");
  try {
    if (j.contains("mode")) c.mode = service_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("endpoint")) c.endpoint = j.at("endpoint").get<std::string>();
    if (j.contains("auth_env_var")) c.auth_env_var = j.at("auth_env_var").get<std::string>();
    if (j.contains("max_concurrent")) c.max_concurrent = j.at("max_concurrent").get<int>();
    if (j.contains("timeout_ms")) c.timeout_ms = j.at("timeout_ms").get<int>();
    if (j.contains("requests_path")) c.requests_path = j.at("requests_path").get<std::string>();
    if (j.contains("responses_path")) c.responses_path = j.at("responses_path").get<std::string>();
    if (j.contains("retry")) {
      const Json& r = j.at("retry");
      if (r.contains("max_attempts")) c.retry.max_attempts = r.at("max_attempts").get<int>();
      if (r.contains("backoff_base_ms")) c.retry.backoff_base_ms = r.at("backoff_base_ms").get<int>();
      if (r.contains("max_backoff_ms")) c.retry.max_backoff_ms = r.at("max_backoff_ms").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, fmt::format("bad service config: {}", e.what()));
  }
  return c;
}

Json ServiceConfig::to_json() const {
  return Json{{"mode", to_string(mode)},
              {"endpoint", endpoint},
              {"auth_env_var", auth_env_var},
              {"max_concurrent", max_concurrent},
              {"timeout_ms", timeout_ms},
              {"retry",
               {{"max_attempts", retry.max_attempts},
                {"backoff_base_ms", retry.backoff_base_ms},
                {"max_backoff_ms", retry.max_backoff_ms}}},
              {"requests_path", requests_path},
              {"responses_path", responses_path}};
}

struct HttpCompletionService::Impl {
  std::string origin;  // scheme://host[:port]
  std::string path;
  std::string api_key;
  int timeout_ms;
};

HttpCompletionService::HttpCompletionService(std::string endpoint, std::string api_key, int timeout_ms)
    : impl_(std::make_unique<Impl>()) {
  std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::config, fmt::format("endpoint '{}' lacks a scheme", endpoint));
  }
  std::size_t slash = endpoint.find('/', scheme + 3);
  impl_->origin = endpoint.substr(0, slash);
  impl_->path = slash == std::string::npos ? "/" : endpoint.substr(slash);
  impl_->api_key = std::move(api_key);
  impl_->timeout_ms = timeout_ms;
}

HttpCompletionService::~HttpCompletionService() = default;

std::string HttpCompletionService::complete(const PromptRequest& request) {
  httplib::Client client(impl_->origin);
  auto timeout = std::chrono::milliseconds(impl_->timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers{{"Authorization", "Bearer " + impl_->api_key}};
  Json body{{"prompt", request.rendered_prompt}, {"temperature", request.decode.temperature}};
  auto res = client.Post(impl_->path, headers, body.dump(), "application/json");
  if (!res) {
    throw ServiceError(fmt::format("request failed: {}", httplib::to_string(res.error())), true);
  }
  if (res->status == 429 || res->status >= 500) {
    throw ServiceError(fmt::format("service returned HTTP {}", res->status), true, res->status);
  }
  if (res->status < 200 || res->status >= 300) {
    throw ServiceError(fmt::format("service returned HTTP {}", res->status), false, res->status);
  }
  Json parsed = Json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("text") ||
      !parsed["text"].is_string()) {
    throw ServiceError("service response lacks a string 'text' field", false, res->status);
  }
  return parsed["text"].get<std::string>();
}

std::unique_ptr<CompletionService> make_http_service(const ServiceConfig& config) {
  config.validate();
  const char* key = std::getenv(config.auth_env_var.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::config,
                fmt::format("environment variable {} is not set", config.auth_env_var));
  }
  return std::make_unique<HttpCompletionService>(config.endpoint, key, config.timeout_ms);
}

std::string complete_with_retry(CompletionService& service, const PromptRequest& request,
                                const RetryPolicy& policy, const SleepFn& sleep) {
  for (int attempt = 1;; ++attempt) {
    try {
      return service.complete(request);
    } catch (const ServiceError& e) {
      if (!e.transient() || attempt >= policy.max_attempts) throw;
      sleep(backoff_delay(attempt, policy));
    }
  }
}

}  // namespace cotkit
