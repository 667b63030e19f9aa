#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "cotkit/service.hpp"

using namespace cotkit;
using std::chrono::milliseconds;

namespace {

struct ScriptedService : CompletionService {
  std::vector<std::optional<ServiceError>> script;  // nullopt = succeed
  int calls = 0;
  std::string complete(const PromptRequest& r) override {
    auto step = script.at(static_cast<std::size_t>(calls++));
    if (step) throw *step;
    return "ok:" + r.trace_id;
  }
};

// Local HTTP endpoint answering each POST with whatever `handler` decides.
struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server.Post("/v1/complete", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1/complete"; }
};

PromptRequest request(std::string prompt = "hello") {
  PromptRequest r;
  r.trace_id = "t1";
  r.rendered_prompt = std::move(prompt);
  return r;
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("modes") {
    CHECK(to_string(ServiceMode::batch_export) == "batch-export");
    CHECK(service_mode_from_string("batch_import") == ServiceMode::batch_import);
    CHECK(service_mode_from_string("live") == ServiceMode::live);
    CHECK_THROWS_AS(service_mode_from_string("psychic"), Error);
  }

  TEST_CASE("exponential backoff with a cap") {
    RetryPolicy p{6, 500, 3000};
    CHECK(backoff_delay(1, p) == milliseconds(500));
    CHECK(backoff_delay(2, p) == milliseconds(1000));
    CHECK(backoff_delay(3, p) == milliseconds(2000));
    CHECK(backoff_delay(4, p) == milliseconds(3000));
    CHECK(backoff_delay(40, p) == milliseconds(3000));
  }

  TEST_CASE("config validation and json") {
    ServiceConfig c;
    c.mode = ServiceMode::live;
    CHECK_THROWS_AS(c.validate(), Error);
    c.endpoint = "http://localhost:1/x";
    CHECK_NOTHROW(c.validate());
    c.max_concurrent = 0;
    CHECK_THROWS_AS(c.validate(), Error);

    ServiceConfig b;
    b.mode = ServiceMode::batch_import;
    CHECK_THROWS_AS(b.validate(), Error);
    b.responses_path = "r.jsonl";
    CHECK_NOTHROW(b.validate());
    auto back = ServiceConfig::from_json(b.to_json());
    CHECK(back.mode == ServiceMode::batch_import);
    CHECK(back.responses_path == "r.jsonl");
    CHECK_THROWS_AS(ServiceConfig::from_json(Json{{"max_concurrent", "many"}}), Error);
  }

  TEST_CASE("retry on transient failures only") {
    std::vector<milliseconds> slept;
    SleepFn sleep = [&](milliseconds d) { slept.push_back(d); };
    RetryPolicy policy{4, 100, 1000};

    ScriptedService flaky;
    flaky.script = {ServiceError("busy", true, 429), ServiceError("down", true, 503), std::nullopt};
    CHECK(complete_with_retry(flaky, request(), policy, sleep) == "ok:t1");
    CHECK(flaky.calls == 3);
    CHECK(slept == std::vector<milliseconds>{milliseconds(100), milliseconds(200)});

    ScriptedService fatal;
    fatal.script = {ServiceError("bad request", false, 400)};
    CHECK_THROWS_AS(complete_with_retry(fatal, request(), policy, sleep), ServiceError);
    CHECK(fatal.calls == 1);

    ScriptedService hopeless;
    hopeless.script.assign(4, ServiceError("busy", true, 429));
    CHECK_THROWS_AS(complete_with_retry(hopeless, request(), policy, sleep), ServiceError);
    CHECK(hopeless.calls == 4);
  }

  TEST_CASE("http wire contract") {
    std::string auth;
    Json body;
    LocalServer srv([&](const httplib::Request& req, httplib::Response& res) {
      auth = req.get_header_value("Authorization");
      body = Json::parse(req.body);
      res.set_content(R"({"text": "{\"id\": \"N1\"}"})", "application/json");
    });
    HttpCompletionService svc(srv.endpoint(), "sekret", 5000);
    CHECK(svc.complete(request("label these")) == "{\"id\": \"N1\"}");
    CHECK(auth == "Bearer sekret");
    CHECK(body["prompt"] == "label these");
    CHECK(body["temperature"] == 0.0);
  }

  TEST_CASE("http status classification") {
    std::atomic<int> status{429};
    LocalServer srv([&](const httplib::Request&, httplib::Response& res) {
      res.status = status.load();
      res.set_content(status == 200 ? "{\"answer\": 1}" : "nope", "text/plain");
    });
    HttpCompletionService svc(srv.endpoint(), "k", 5000);
    auto classify = [&](int s) {
      status = s;
      try {
        svc.complete(request());
      } catch (const ServiceError& e) {
        return std::make_pair(e.transient(), e.status());
      }
      return std::make_pair(false, -1);
    };
    CHECK(classify(429) == std::make_pair(true, 429));
    CHECK(classify(502) == std::make_pair(true, 502));
    CHECK(classify(401) == std::make_pair(false, 401));
    CHECK(classify(200) == std::make_pair(false, 200));  // body lacks "text"
  }

  TEST_CASE("unreachable endpoint is transient") {
    HttpCompletionService svc("http://127.0.0.1:1/none", "k", 500);
    try {
      svc.complete(request());
      FAIL("connected");
    } catch (const ServiceError& e) {
      CHECK(e.transient());
    }
  }

  TEST_CASE("auth key comes from the environment") {
    ServiceConfig c;
    c.mode = ServiceMode::live;
    c.endpoint = "http://127.0.0.1:1/x";
    c.auth_env_var = "COTKIT_TEST_UNSET_KEY";
    ::unsetenv("COTKIT_TEST_UNSET_KEY");
    CHECK_THROWS_AS(make_http_service(c), Error);
    ::setenv("COTKIT_TEST_UNSET_KEY", "abc", 1);
    CHECK(make_http_service(c) != nullptr);
    ::unsetenv("COTKIT_TEST_UNSET_KEY");
    CHECK_THROWS_AS(HttpCompletionService("localhost/x", "k", 10), Error);
  }
}
