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

#include "asrfix/corrector.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "asrfix/jsonl.hpp"
#include "asrfix/util.hpp"

namespace asrfix {

namespace {

std::string_view strip_surrounding_quotes(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string_view strip_speaker_tag(std::string_view s) {
  for (std::string_view tag : {"child:", "adult:"}) {
    if (s.size() >= tag.size() &&
        lowercase_ascii(s.substr(0, tag.size())) == tag) {
      return trim(s.substr(tag.size()));
    }
  }
  return s;
}

std::string_view first_nonempty_line(std::string_view s) {
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t eol = s.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? s.substr(pos) : s.substr(pos, eol - pos);
    if (!trim(line).empty()) return line;
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return {};
}

std::string clean_model_output(std::string_view raw) {
  std::string_view s = trim(raw);
  s = strip_surrounding_quotes(s);
  s = strip_speaker_tag(s);
  s = first_nonempty_line(s);
  return std::string(trim(s));
}

}  // namespace

PostprocessOutcome postprocess(std::string_view raw, std::string_view best,
                               bool fallback_enabled) {
  PostprocessOutcome outcome;
  outcome.corrected = clean_model_output(raw);
  // Raw whitespace tokens, pre-normalization: the rule guards generation
  // runaways before any scoring-side processing happens.
  if (fallback_enabled &&
      word_count(outcome.corrected) > word_count(best) + 3) {
    outcome.corrected = std::string(best);
    outcome.fallback_applied = true;
  }
  return outcome;
}

CorrectionResult correct_utterance(const Utterance& utt, const NBestList& nbest,
                                   std::span<const HistoryEntry> history,
                                   const PromptTemplate& tpl,
                                   const GenerationParams& params,
                                   Backend& backend,
                                   const CorrectorOptions& options) {
  CorrectionResult result;
  result.utt_id = utt.utt_id;
  result.context_k = options.context_k;
  PromptInstance instance =
      options.context_k == 0
          ? build_no_context(utt, nbest, tpl)
          : build_with_context(utt, nbest, history, options.context_k, tpl,
                               options.allow_any_k);
  try {
    result.raw_output = backend.complete(instance, params);
  } catch (const BackendError& e) {
    // Degrade to the best hypothesis; a long run must survive flaky calls.
    result.error = e.what();
    result.corrected = nbest.best();
    return result;
  }
  PostprocessOutcome outcome =
      postprocess(result.raw_output, nbest.best(), options.fallback_enabled);
  result.corrected = std::move(outcome.corrected);
  result.fallback_applied = outcome.fallback_applied;
  return result;
}

std::vector<CorrectionResult> correct_session(
    std::span<const Utterance> session, const NBestIndex& nbests,
    const PromptTemplate& tpl, const GenerationParams& params,
    Backend& backend, const CorrectorOptions& options) {
  std::vector<CorrectionResult> results;
  results.reserve(session.size());
  std::vector<HistoryEntry> history;  // corrected texts, oldest first
  for (const Utterance& utt : session) {
    const NBestList& nbest = nbests.at(utt.utt_id);
    std::span<const HistoryEntry> window;
    if (options.context_k > 0) {
      std::size_t take = std::min<std::size_t>(
          history.size(), static_cast<std::size_t>(options.context_k));
      window = std::span<const HistoryEntry>(history).subspan(history.size() - take);
    }
    results.push_back(
        correct_utterance(utt, nbest, window, tpl, params, backend, options));
    if (options.context_k > 0) {
      // Inferred context: what the system actually produced, after the
      // fallback rule, errors and all.
      history.push_back(HistoryEntry{utt.speaker, results.back().corrected});
    }
  }
  return results;
}

std::vector<CorrectionResult> correct_corpus(const Corpus& corpus,
                                             const NBestIndex& nbests,
                                             const PromptTemplate& tpl,
                                             const GenerationParams& params,
                                             Backend& backend,
                                             const CorrectorOptions& options) {
  std::vector<CorrectionResult> results(corpus.utterances.size());
  if (options.context_k == 0) {
    // Independent utterances: free parallelism up to the in-flight bound.
    parallel_for(corpus.utterances.size(), options.concurrency,
                 [&](std::size_t i) {
                   const Utterance& utt = corpus.utterances[i];
                   results[i] = correct_utterance(utt, nbests.at(utt.utt_id),
                                                  {}, tpl, params, backend,
                                                  options);
                 });
    return results;
  }
  // Context mode: sessions in parallel, strict order inside each session.
  std::vector<std::string> sessions = corpus.session_ids();
  std::vector<std::size_t> offsets;
  offsets.reserve(sessions.size());
  std::size_t offset = 0;
  for (const auto& id : sessions) {
    offsets.push_back(offset);
    offset += corpus.session(id).size();
  }
  parallel_for(sessions.size(), options.concurrency, [&](std::size_t s) {
    std::span<const Utterance> session = corpus.session(sessions[s]);
    std::vector<CorrectionResult> session_results =
        correct_session(session, nbests, tpl, params, backend, options);
    std::copy(session_results.begin(), session_results.end(),
              results.begin() + static_cast<std::ptrdiff_t>(offsets[s]));
  });
  return results;
}

std::vector<CorrectionResult> load_corrections(const std::string& path) {
  std::vector<CorrectionResult> results;
  for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    CorrectionResult r;
    r.utt_id = require_string(obj, "utt_id", path, line_no);
    r.corrected = require_string(obj, "corrected", path, line_no);
    r.raw_output = require_string(obj, "raw_llm", path, line_no);
    auto fallback = obj.find("fallback");
    if (fallback == obj.end() || !fallback->is_boolean()) {
      throw ParseError(path, line_no, "missing or non-boolean field \"fallback\"");
    }
    r.fallback_applied = fallback->get<bool>();
    r.context_k = static_cast<int>(require_int(obj, "context_k", path, line_no));
    if (auto it = obj.find("error"); it != obj.end() && it->is_string()) {
      r.error = it->get<std::string>();
    }
    results.push_back(std::move(r));
  });
  return results;
}

void write_corrections(std::span<const CorrectionResult> results,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto& r : results) {
    nlohmann::ordered_json obj;
    obj["utt_id"] = r.utt_id;
    obj["corrected"] = r.corrected;
    obj["raw_llm"] = r.raw_output;
    obj["fallback"] = r.fallback_applied;
    obj["context_k"] = r.context_k;
    if (!r.error.empty()) obj["error"] = r.error;
    out << obj.dump() << '\n';
  }
}

}  // namespace asrfix
