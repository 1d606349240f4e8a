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

#include "asrfix/backend.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "asrfix/jsonl.hpp"
#include "asrfix/rng.hpp"

namespace asrfix {

std::string IdentityBackend::complete(const PromptInstance& prompt,
                                      const GenerationParams&) {
  return prompt.best_hypothesis;
}

OracleBackend::OracleBackend(const Corpus& corpus) {
  for (const auto& u : corpus.utterances) {
    reference_by_id_[u.utt_id] = u.text;
  }
}

std::string OracleBackend::complete(const PromptInstance& prompt,
                                    const GenerationParams&) {
  auto it = reference_by_id_.find(prompt.utt_id);
  if (it == reference_by_id_.end()) {
    throw BackendError("oracle backend has no reference for utt_id \"" +
                           prompt.utt_id + "\"",
                       /*attempts=*/0);
  }
  return it->second;
}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::string> responses)
    : responses_(responses.begin(), responses.end()) {}

ScriptedBackend ScriptedBackend::load(const std::string& path) {
  std::map<std::string, std::string> responses;
  for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    std::string utt_id = require_string(obj, "utt_id", path, line_no);
    responses[utt_id] = require_string(obj, "response", path, line_no);
  });
  return ScriptedBackend(std::move(responses));
}

std::string ScriptedBackend::complete(const PromptInstance& prompt,
                                      const GenerationParams&) {
  auto it = responses_.find(prompt.utt_id);
  if (it == responses_.end()) {
    throw BackendError("scripted backend has no response for utt_id \"" +
                           prompt.utt_id + "\"",
                       /*attempts=*/0);
  }
  return it->second;
}

namespace {

// Jitter in [0, 0.25); reproducibility is irrelevant here, it only spreads
// retry storms, so a cheap counter-derived stream is enough.
double retry_jitter() {
  static std::atomic<std::uint64_t> counter{0};
  return static_cast<double>(splitmix64(counter.fetch_add(1)) >> 11) *
         0x1.0p-53 * 0.25;
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpBackend::HttpBackend(HttpOptions options) : options_(std::move(options)) {
  const std::string& url = options_.endpoint;
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ValidationError("endpoint must be an http(s) URL: " + url);
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_ = url;
    path_ = "/v1/chat/completions";
  } else {
    scheme_host_ = url.substr(0, path_start);
    path_ = url.substr(path_start);
  }
}

std::string HttpBackend::request_body(const PromptInstance& prompt,
                                      const GenerationParams& params) {
  nlohmann::ordered_json body;
  body["model"] = params.model_name;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", prompt.system}},
       {{"role", "user"}, {"content", prompt.user}}});
  body["temperature"] = params.temperature;
  if (params.max_output_words > 0) body["max_tokens"] = params.max_output_words;
  return body.dump();
}

std::string HttpBackend::complete(const PromptInstance& prompt,
                                  const GenerationParams& params) {
  const std::string body = request_body(prompt, params);
  httplib::Headers headers;
  if (const char* key = std::getenv(options_.api_key_env.c_str());
      key != nullptr && key[0] != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  std::string last_error;
  int attempts = 0;
  for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
    if (attempt > 0) {
      double backoff_ms = options_.backoff_base_ms * std::pow(2.0, attempt - 1);
      backoff_ms = std::min<double>(backoff_ms, options_.backoff_max_ms);
      backoff_ms *= 1.0 + retry_jitter();
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long>(backoff_ms)));
    }
    ++attempts;
    // A client per call keeps complete() safe under concurrency.
    httplib::Client client(scheme_host_);
    auto timeout_s = static_cast<time_t>(params.request_timeout_s);
    auto timeout_us = static_cast<time_t>(
        (params.request_timeout_s - static_cast<double>(timeout_s)) * 1e6);
    client.set_connection_timeout(timeout_s, timeout_us);
    client.set_read_timeout(timeout_s, timeout_us);
    client.set_write_timeout(timeout_s, timeout_us);
    httplib::Result result = client.Post(path_, headers, body, "application/json");
    if (!result) {
      last_error = "connection failed: " + httplib::to_string(result.error());
      continue;
    }
    if (retryable_status(result->status)) {
      last_error = "server returned status " + std::to_string(result->status);
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      throw BackendError("http backend: status " + std::to_string(result->status) +
                             " from " + scheme_host_ + path_,
                         attempts);
    }
    nlohmann::json response;
    try {
      response = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(std::string("http backend: unparseable response: ") +
                             e.what(),
                         attempts);
    }
    try {
      return response.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw BackendError(
          "http backend: response lacks choices[0].message.content", attempts);
    }
  }
  throw BackendError("http backend: " + last_error + " (after " +
                         std::to_string(attempts) + " attempts)",
                     attempts);
}

std::string RecordingBackend::complete(const PromptInstance& prompt,
                                       const GenerationParams& params) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    recorded_.push_back(prompt);
  }
  return inner_.complete(prompt, params);
}

std::vector<PromptInstance> RecordingBackend::recorded() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return recorded_;
}

std::unique_ptr<Backend> make_backend(const BackendKind& kind,
                                      const Corpus* corpus) {
  if (kind.kind == "identity") return std::make_unique<IdentityBackend>();
  if (kind.kind == "oracle") {
    if (!corpus) throw ValidationError("oracle backend requires a corpus");
    return std::make_unique<OracleBackend>(*corpus);
  }
  if (kind.kind == "scripted") {
    return std::make_unique<ScriptedBackend>(
        ScriptedBackend::load(kind.script_path));
  }
  if (kind.kind == "http") return std::make_unique<HttpBackend>(kind.http);
  throw ValidationError("unknown backend kind \"" + kind.kind +
                        "\" (expected identity, oracle, scripted or http)");
}

}  // namespace asrfix
