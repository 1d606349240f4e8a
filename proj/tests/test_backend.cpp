// Copyright 2026 The asrfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "asrfix/backend.hpp"
#include "asrfix/util.hpp"
#include "testutil.hpp"

using namespace asrfix;

namespace {

PromptInstance sample_prompt() {
  PromptInstance p;
  p.system = "system text";
  p.user = "user text with\nnewline and unicode \xe2\x80\x94 dash";
  p.utt_id = "u1";
  p.context_k = 0;
  p.best_hypothesis = "hello there";
  return p;
}

struct StubServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  explicit StubServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~StubServer() {
    server.stop();
    thread.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  }
};

HttpBackend fast_backend(const std::string& endpoint) {
  HttpOptions options;
  options.endpoint = endpoint;
  options.backoff_base_ms = 1;
  return HttpBackend(options);
}

}  // namespace

TEST_CASE("identity backend echoes the best hypothesis") {
  IdentityBackend backend;
  GenerationParams params;
  CHECK(backend.complete(sample_prompt(), params) == "hello there");
  CHECK(backend.complete(sample_prompt(), params) == "hello there");  // pure
}

TEST_CASE("oracle backend returns the reference transcript") {
  Corpus corpus = testutil::make_corpus(5, 2);
  corpus.utterances[0].text = "i like trains";
  OracleBackend backend(corpus);
  PromptInstance p = sample_prompt();
  p.utt_id = corpus.utterances[0].utt_id;
  GenerationParams params;
  CHECK(backend.complete(p, params) == "i like trains");
  p.utt_id = "nope";
  CHECK_THROWS_AS(backend.complete(p, params), BackendError);
}

TEST_CASE("scripted backend looks up by utt_id and is pure") {
  ScriptedBackend backend({{"u1", "reply one"}, {"u2", "reply two"}});
  GenerationParams params;
  PromptInstance p = sample_prompt();
  CHECK(backend.complete(p, params) == "reply one");
  CHECK(backend.complete(p, params) == "reply one");
  p.utt_id = "u9";
  CHECK_THROWS_AS(backend.complete(p, params), BackendError);
}

TEST_CASE("http backend sends the chat-completions body unmodified") {
  std::string seen_body;
  std::string seen_auth;
  StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    seen_auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"fixed text"}}]})",
                    "application/json");
  });

  setenv("NBEST_API_KEY", "test-key-123", 1);
  HttpBackend backend = fast_backend(stub.endpoint());
  GenerationParams params;
  params.model_name = "test-model";
  PromptInstance prompt = sample_prompt();
  std::string reply = backend.complete(prompt, params);
  unsetenv("NBEST_API_KEY");

  CHECK(reply == "fixed text");
  CHECK(seen_auth == "Bearer test-key-123");
  nlohmann::json body = nlohmann::json::parse(seen_body);
  CHECK(body["model"] == "test-model");
  CHECK(body["temperature"] == 0.2);  // the default
  REQUIRE(body["messages"].size() == 2);
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][0]["content"] == prompt.system);
  CHECK(body["messages"][1]["role"] == "user");
  CHECK(body["messages"][1]["content"] == prompt.user);
  CHECK(!body.contains("max_tokens"));
}

TEST_CASE("http backend retries transient failures") {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    if (calls.fetch_add(1) < 2) {
      res.status = 500;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"ok"}}]})",
                    "application/json");
  });
  HttpBackend backend = fast_backend(stub.endpoint());
  GenerationParams params;
  params.max_retries = 3;
  CHECK(backend.complete(sample_prompt(), params) == "ok");
  CHECK(calls.load() == 3);
}

TEST_CASE("http backend reports attempts when retries are exhausted") {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    calls.fetch_add(1);
    res.status = 503;
  });
  HttpBackend backend = fast_backend(stub.endpoint());
  GenerationParams params;
  params.max_retries = 2;
  try {
    backend.complete(sample_prompt(), params);
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK(e.attempts() == 3);
    CHECK(calls.load() == 3);
  }
}

TEST_CASE("http backend does not retry hard client errors") {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    calls.fetch_add(1);
    res.status = 400;
  });
  HttpBackend backend = fast_backend(stub.endpoint());
  GenerationParams params;
  params.max_retries = 3;
  CHECK_THROWS_AS(backend.complete(sample_prompt(), params), BackendError);
  CHECK(calls.load() == 1);
}

TEST_CASE("http backend passes the output-length hint through") {
  GenerationParams params;
  params.model_name = "m";
  params.max_output_words = 40;
  nlohmann::json body =
      nlohmann::json::parse(HttpBackend::request_body(sample_prompt(), params));
  CHECK(body["max_tokens"] == 40);
}

TEST_CASE("recording backend captures prompts and delegates") {
  IdentityBackend inner;
  RecordingBackend recorder(inner);
  GenerationParams params;
  CHECK(recorder.complete(sample_prompt(), params) == "hello there");
  auto recorded = recorder.recorded();
  REQUIRE(recorded.size() == 1);
  CHECK(recorded[0].user == sample_prompt().user);
}

TEST_CASE("make_backend factory") {
  Corpus corpus = testutil::make_corpus(5, 2);
  BackendKind kind;
  kind.kind = "identity";
  CHECK(make_backend(kind, nullptr)->name() == "identity");
  kind.kind = "oracle";
  CHECK(make_backend(kind, &corpus)->name() == "oracle");
  CHECK_THROWS_AS(make_backend(kind, nullptr), ValidationError);
  kind.kind = "nonsense";
  CHECK_THROWS_AS(make_backend(kind, &corpus), ValidationError);
}
