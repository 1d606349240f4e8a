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

#ifndef ASRFIX_PROMPT_HPP_
#define ASRFIX_PROMPT_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrfix/corpus.hpp"
#include "asrfix/nbest.hpp"

namespace asrfix {

enum class TemplateKind { kNoContext, kContext };

// Correction prompt template. user_text placeholders:
//   {speaker}         "Child" or "Adult"
//   {best}            rank-1 hypothesis
//   {others}          remaining hypotheses, one per line; "None" if absent
// and, for kContext templates only:
//   {num_context}     configured context size k
//   {prev_sentences}  "Speaker: text" lines, chronological; "None" if empty
//
// Literal braces are written doubled ({{ }}) in template files. Validation
// happens at parse time: unknown placeholder names, context placeholders in
// a no-context template, or a missing required placeholder are all errors.
struct PromptTemplate {
  TemplateKind kind = TemplateKind::kNoContext;
  std::string system_text;  // no placeholders
  std::string user_text;

  // File format: first line "kind: no_context|context", then "[system]"
  // and "[user]" sections.
  static PromptTemplate parse(std::string_view contents,
                              const std::string& origin);
  static PromptTemplate load(const std::string& path);

  static const PromptTemplate& default_no_context();
  static const PromptTemplate& default_context();
};

// System prompt used for single-child tutoring corpora.
extern const char kTutoringSystemPrompt[];

struct PromptInstance {
  std::string system;
  std::string user;
  std::string utt_id;
  int context_k = 0;  // 0, 1, or 3
  std::string best_hypothesis;  // carried for the fallback rule downstream
};

struct HistoryEntry {
  Speaker speaker = Speaker::kChild;
  std::string text;
};

PromptInstance build_no_context(const Utterance& utt, const NBestList& nbest,
                                const PromptTemplate& tpl);

// history holds at most k entries, most recent last. k must be 1 or 3
// unless allow_any_k is set.
PromptInstance build_with_context(const Utterance& utt, const NBestList& nbest,
                                  std::span<const HistoryEntry> history, int k,
                                  const PromptTemplate& tpl,
                                  bool allow_any_k = false);

// One instruction-tuning example: assistant carries the verbatim
// (un-normalized) reference transcript.
struct SftRecord {
  std::string system;
  std::string user;
  std::string assistant;
};

// One record per utterance, corpus order. context_k = 0 renders the
// no-context template; context_k in {1,3} renders the context template
// with ground-truth previous reference texts as history.
std::vector<SftRecord> emit_sft_dataset(const Corpus& corpus,
                                        const NBestIndex& nbests,
                                        int context_k,
                                        const PromptTemplate& tpl,
                                        bool allow_any_k = false);

// {"messages":[{"role":"system",...},{"role":"user",...},{"role":"assistant",...}]}
void write_sft_jsonl(std::ostream& out, std::span<const SftRecord> records);

}  // namespace asrfix

#endif  // ASRFIX_PROMPT_HPP_
