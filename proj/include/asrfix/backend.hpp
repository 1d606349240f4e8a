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

#ifndef ASRFIX_BACKEND_HPP_
#define ASRFIX_BACKEND_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "asrfix/corpus.hpp"
#include "asrfix/prompt.hpp"
#include "asrfix/util.hpp"

namespace asrfix {

struct GenerationParams {
  double temperature = 0.2;
  int max_output_words = 0;  // hint; 0 = leave decoding length to the server
  std::string model_name;
  double request_timeout_s = 30.0;
  int max_retries = 2;
};

// Raised when a completion cannot be obtained; attempts() counts requests
// actually sent.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_ = 0;
};

// Uniform completion interface. Implementations must tolerate concurrent
// complete() calls.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const PromptInstance& prompt,
                               const GenerationParams& params) = 0;
  virtual std::string name() const = 0;
};

// Echoes the best hypothesis; the pipeline-neutral baseline.
class IdentityBackend : public Backend {
 public:
  std::string complete(const PromptInstance& prompt,
                       const GenerationParams&) override;
  std::string name() const override { return "identity"; }
};

// Answers with the reference transcript for the prompt's utt_id.
class OracleBackend : public Backend {
 public:
  explicit OracleBackend(const Corpus& corpus);
  std::string complete(const PromptInstance& prompt,
                       const GenerationParams&) override;
  std::string name() const override { return "oracle"; }

 private:
  std::map<std::string, std::string, std::less<>> reference_by_id_;
};

// Fixed utt_id -> reply table; a missing key is a BackendError.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::map<std::string, std::string> responses);
  static ScriptedBackend load(const std::string& path);  // corrections-style jsonl
  std::string complete(const PromptInstance& prompt,
                       const GenerationParams&) override;
  std::string name() const override { return "scripted"; }

 private:
  std::map<std::string, std::string, std::less<>> responses_;
};

struct HttpOptions {
  std::string endpoint;           // e.g. http://host:port/v1/chat/completions
  std::string api_key_env = "NBEST_API_KEY";
  int backoff_base_ms = 1000;     // exponential, factor 2, jitter 0..25%
  int backoff_max_ms = 30000;
};

// Chat-completions client: POSTs {"model", "messages", "temperature"} and
// returns choices[0].message.content. System/user message bytes are the
// PromptInstance fields, untouched. Retries connection errors, timeouts
// and 5xx/429 up to max_retries times.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpOptions options);
  std::string complete(const PromptInstance& prompt,
                       const GenerationParams& params) override;
  std::string name() const override { return "http"; }

  // Request body as sent on the wire; exposed for tests.
  static std::string request_body(const PromptInstance& prompt,
                                  const GenerationParams& params);

 private:
  HttpOptions options_;
  std::string scheme_host_;  // "http://host:port"
  std::string path_;         // "/v1/chat/completions"
};

// Decorator that records every prompt passing through; used to assert
// what a downstream model would actually have seen.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(Backend& inner) : inner_(inner) {}
  std::string complete(const PromptInstance& prompt,
                       const GenerationParams& params) override;
  std::string name() const override { return inner_.name() + "+recorded"; }
  std::vector<PromptInstance> recorded() const;

 private:
  Backend& inner_;
  mutable std::mutex mutex_;
  std::vector<PromptInstance> recorded_;
};

// CLI-facing backend selector.
struct BackendKind {
  std::string kind;        // identity | oracle | scripted | http
  std::string script_path; // scripted
  HttpOptions http;        // http
};

// The oracle backend needs the corpus; others ignore it.
std::unique_ptr<Backend> make_backend(const BackendKind& kind,
                                      const Corpus* corpus);

}  // namespace asrfix

#endif  // ASRFIX_BACKEND_HPP_
