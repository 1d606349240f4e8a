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

#ifndef ASRFIX_SYNTH_HPP_
#define ASRFIX_SYNTH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asrfix/corpus.hpp"
#include "asrfix/nbest.hpp"
#include "asrfix/rng.hpp"

namespace asrfix {

// Two synthetic error regimes: character-level spelling noise (the CTC
// flavor) and whole-word confusions from a lexicon (the autoregressive
// flavor: plausible words, wrong context).
enum class CorruptionModel { kCtcSpelling, kLexicalSubstitution };

using ConfusionLexicon = std::map<std::string, std::vector<std::string>>;

struct CharOps {
  bool substitute = true;
  bool erase = true;
  bool insert = true;
};

struct CorruptionConfig {
  CorruptionModel model = CorruptionModel::kCtcSpelling;
  double base_rate = 0.1;       // per character or per word
  double rank_rate_step = 0.05; // additive per rank; rates clipped to [0,1]
  int n = 5;                    // hypotheses per utterance
  std::uint64_t seed = 0;
  ConfusionLexicon confusion_lexicon;  // empty = built-in for the lex model
  CharOps char_ops;
  std::string source_tag;  // default derived from the model
};

void validate_corruption_config(const CorruptionConfig& cfg);

// Per non-whitespace character, with probability `rate`, applies one of
// the enabled ops (substitute with a different lowercase letter / delete /
// insert a random letter after). Whitespace is never touched, so word
// boundaries only move when a whole word is erased.
std::string corrupt_chars(std::string_view text, double rate, Rng& rng,
                          const CharOps& ops = CharOps{});

// Per whitespace word, with probability `rate`, replaces via the lexicon
// (uniform among candidates); unmapped words pass through. Word count is
// preserved exactly.
std::string corrupt_words(std::string_view text, double rate,
                          const ConfusionLexicon& lexicon, Rng& rng);

// Rank r gets rate clip(base_rate + (r-1)*rank_rate_step, 0, 1).
double rank_rate(const CorruptionConfig& cfg, int rank);

// Deterministic for a given (utterance, cfg): the RNG is seeded from
// (cfg.seed, utt_id), so per-utterance generation can run in any order or
// in parallel without changing output. Duplicate hypotheses are re-drawn
// a bounded number of times, then tolerated.
NBestList make_nbest(const Utterance& utt, const CorruptionConfig& cfg);

std::vector<NBestList> make_nbest_corpus(const Corpus& corpus,
                                         const CorruptionConfig& cfg);

// ~100 directed homophone-style confusions used by demos and tests.
const ConfusionLexicon& builtin_confusion_lexicon();
ConfusionLexicon load_confusion_lexicon(const std::string& path);

}  // namespace asrfix

#endif  // ASRFIX_SYNTH_HPP_
