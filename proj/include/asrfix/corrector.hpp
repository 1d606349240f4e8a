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

#ifndef ASRFIX_CORRECTOR_HPP_
#define ASRFIX_CORRECTOR_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrfix/backend.hpp"
#include "asrfix/corpus.hpp"
#include "asrfix/nbest.hpp"
#include "asrfix/prompt.hpp"

namespace asrfix {

struct CorrectionResult {
  std::string utt_id;
  std::string raw_output;  // as returned by the backend
  std::string corrected;   // final transcript
  bool fallback_applied = false;
  int context_k = 0;
  std::string error;  // non-empty when the backend failed and we degraded
};

struct PostprocessOutcome {
  std::string corrected;
  bool fallback_applied = false;
};

// Cleans the raw model output (strip one pair of surrounding quotes, drop
// a leading "Child:"/"Adult:" tag, keep the first non-empty line, trim),
// then applies the length fallback: when enabled and the cleaned reply
// exceeds the best hypothesis by more than three whitespace words, the
// best hypothesis wins. Counting is on raw tokens, pre-normalization.
PostprocessOutcome postprocess(std::string_view raw, std::string_view best,
                               bool fallback_enabled);

struct CorrectorOptions {
  int context_k = 0;  // 0 = no-context template; 1 or 3 = context template
  bool fallback_enabled = true;
  int concurrency = 4;
  bool allow_any_k = false;
};

// prompt -> completion -> postprocess for one utterance. Backend errors do
// not propagate: the result degrades to the best hypothesis and carries
// the error text.
CorrectionResult correct_utterance(const Utterance& utt, const NBestList& nbest,
                                   std::span<const HistoryEntry> history,
                                   const PromptTemplate& tpl,
                                   const GenerationParams& params,
                                   Backend& backend,
                                   const CorrectorOptions& options);

// Session utterances in index order. In context modes the history for
// utterance i is the POST-FALLBACK corrected text of utterances i-k..i-1,
// with their speaker roles; processing is strictly sequential. No-context
// mode treats utterances independently.
std::vector<CorrectionResult> correct_session(
    std::span<const Utterance> session, const NBestIndex& nbests,
    const PromptTemplate& tpl, const GenerationParams& params,
    Backend& backend, const CorrectorOptions& options);

// Whole corpus; sessions run in parallel (and utterances too, in
// no-context mode) up to options.concurrency. Results in corpus order.
std::vector<CorrectionResult> correct_corpus(const Corpus& corpus,
                                             const NBestIndex& nbests,
                                             const PromptTemplate& tpl,
                                             const GenerationParams& params,
                                             Backend& backend,
                                             const CorrectorOptions& options);

std::vector<CorrectionResult> load_corrections(const std::string& path);
void write_corrections(std::span<const CorrectionResult> results,
                       const std::string& path);

}  // namespace asrfix

#endif  // ASRFIX_CORRECTOR_HPP_
