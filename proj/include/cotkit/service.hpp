#pragma once

// Generic single-turn completion contract used for annotation.
//
// Wire format (HTTP POST, JSON):
//   request  {"prompt": "...", "temperature": 0.0}
//   response {"text": "..."}
// The key is read from a configurable environment variable and sent as
// "Authorization: Bearer <key>".

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "cotkit/annotator.hpp"

namespace cotkit {

enum class ServiceMode { live, batch_export, batch_import, heuristic };

std::string_view to_string(ServiceMode m);
ServiceMode service_mode_from_string(std::string_view s);

struct RetryPolicy {
  int max_attempts = 4;
  int backoff_base_ms = 500;
  int max_backoff_ms = 30000;
};

/// Delay before retry number `attempt` (1-based): base * 2^(attempt-1),
/// capped at max_backoff_ms.
std::chrono::milliseconds backoff_delay(int attempt, const RetryPolicy& policy);

struct ServiceConfig {
  ServiceMode mode = ServiceMode::heuristic;
  std::string endpoint;
  std::string auth_env_var = "COTKIT_API_KEY";
  int max_concurrent = 4;
  int timeout_ms = 120000;
  RetryPolicy retry;
  std::string requests_path;   // batch_export output
  std::string responses_path;  // batch_import input

  /// Live mode needs an endpoint and auth variable name; batch modes need
  /// their file path. Throws Error(config).
  void validate() const;

  static ServiceConfig from_json(const Json& j);
  Json to_json() const;
};

/// Raised by services. Transient failures (timeouts, 429, 5xx) are retried.
class ServiceError : public Error {
 public:
  ServiceError(const std::string& message, bool transient, int status = 0)
      : Error(ErrorCode::service, message), transient_(transient), status_(status) {}
  bool transient() const { return transient_; }
  int status() const { return status_; }

 private:
  bool transient_;
  int status_;
};

class CompletionService {
 public:
  virtual ~CompletionService() = default;
  /// Returns the completion text or throws ServiceError.
  virtual std::string complete(const PromptRequest& request) = 0;
};

class HttpCompletionService : public CompletionService {
 public:
  HttpCompletionService(std::string endpoint, std::string api_key, int timeout_ms);
  ~HttpCompletionService() override;

  std::string complete(const PromptRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reads the key from config.auth_env_var; throws Error(config) when unset.
std::unique_ptr<CompletionService> make_http_service(const ServiceConfig& config);

using SleepFn = std::function<void(std::chrono::milliseconds)>;

/// Calls the service, retrying transient failures with exponential backoff.
std::string complete_with_retry(CompletionService& service, const PromptRequest& request,
                                const RetryPolicy& policy, const SleepFn& sleep);

}  // namespace cotkit
