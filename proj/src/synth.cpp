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

#include "asrfix/synth.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "asrfix/util.hpp"

namespace asrfix {

namespace {

bool is_space_byte(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

char random_letter(Rng& rng) {
  return static_cast<char>('a' + rng.below(26));
}

char random_letter_except(Rng& rng, char avoid) {
  if (avoid < 'a' || avoid > 'z') return random_letter(rng);
  char c = static_cast<char>('a' + rng.below(25));
  if (c >= avoid) ++c;
  return c;
}

}  // namespace

void validate_corruption_config(const CorruptionConfig& cfg) {
  if (cfg.base_rate < 0.0 || cfg.base_rate > 1.0) {
    throw ValidationError("base_rate must be in [0,1]");
  }
  if (cfg.rank_rate_step < 0.0) {
    throw ValidationError("rank_rate_step must be non-negative");
  }
  if (cfg.n < 1 || cfg.n > 10) {
    throw ValidationError("n must be in 1..10");
  }
  if (cfg.model == CorruptionModel::kCtcSpelling && !cfg.char_ops.substitute &&
      !cfg.char_ops.erase && !cfg.char_ops.insert) {
    throw ValidationError("ctc_spelling needs at least one character op enabled");
  }
}

std::string corrupt_chars(std::string_view text, double rate, Rng& rng,
                          const CharOps& ops) {
  std::vector<char> enabled;
  if (ops.substitute) enabled.push_back('s');
  if (ops.erase) enabled.push_back('d');
  if (ops.insert) enabled.push_back('i');
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    // Whitespace and multibyte sequences pass through untouched: word
    // boundaries stay put and UTF-8 stays valid.
    if (is_space_byte(c) || static_cast<unsigned char>(c) >= 0x80 ||
        !rng.bernoulli(rate)) {
      out += c;
      continue;
    }
    switch (enabled[rng.below(enabled.size())]) {
      case 's':
        out += random_letter_except(rng, c);
        break;
      case 'd':
        break;
      case 'i':
        out += c;
        out += random_letter(rng);
        break;
    }
  }
  return out;
}

std::string corrupt_words(std::string_view text, double rate,
                          const ConfusionLexicon& lexicon, Rng& rng) {
  std::vector<std::string> words = split_whitespace(text);
  for (auto& word : words) {
    if (!rng.bernoulli(rate)) continue;
    auto it = lexicon.find(word);
    if (it == lexicon.end() || it->second.empty()) continue;
    word = it->second[rng.below(it->second.size())];
  }
  return join(words, " ");
}

double rank_rate(const CorruptionConfig& cfg, int rank) {
  double rate = cfg.base_rate + (rank - 1) * cfg.rank_rate_step;
  return std::clamp(rate, 0.0, 1.0);
}

NBestList make_nbest(const Utterance& utt, const CorruptionConfig& cfg) {
  validate_corruption_config(cfg);
  const ConfusionLexicon& lexicon =
      cfg.model == CorruptionModel::kLexicalSubstitution &&
              cfg.confusion_lexicon.empty()
          ? builtin_confusion_lexicon()
          : cfg.confusion_lexicon;
  Rng rng(derive_seed(cfg.seed, utt.utt_id));
  NBestList list;
  list.utt_id = utt.utt_id;
  list.source = !cfg.source_tag.empty() ? cfg.source_tag
                : cfg.model == CorruptionModel::kCtcSpelling
                    ? "synthetic-ctc"
                    : "synthetic-lex";
  constexpr int kMaxRedraws = 8;
  for (int rank = 1; rank <= cfg.n; ++rank) {
    double rate = rank_rate(cfg, rank);
    std::string hyp;
    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
      hyp = cfg.model == CorruptionModel::kCtcSpelling
                ? corrupt_chars(utt.text, rate, rng, cfg.char_ops)
                : corrupt_words(utt.text, rate, lexicon, rng);
      bool duplicate = std::find(list.hyps.begin(), list.hyps.end(), hyp) !=
                       list.hyps.end();
      // Near-duplicates happen in real N-best lists too; give distinctness
      // a few chances, then keep whatever came out.
      if (!duplicate || rate == 0.0) break;
    }
    list.hyps.push_back(std::move(hyp));
  }
  return list;
}

std::vector<NBestList> make_nbest_corpus(const Corpus& corpus,
                                         const CorruptionConfig& cfg) {
  std::vector<NBestList> lists;
  lists.reserve(corpus.utterances.size());
  for (const auto& utt : corpus.utterances) {
    lists.push_back(make_nbest(utt, cfg));
  }
  return lists;
}

const ConfusionLexicon& builtin_confusion_lexicon() {
  // Homophone-style confusions: plausible words, wrong context.
  static const ConfusionLexicon kLexicon = [] {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"ate", "eight"},   {"bare", "bear"},   {"blew", "blue"},
        {"board", "bored"}, {"brake", "break"}, {"buy", "by"},
        {"cell", "sell"},   {"cent", "sent"},   {"dear", "deer"},
        {"die", "dye"},     {"fair", "fare"},   {"flour", "flower"},
        {"for", "four"},    {"hair", "hare"},   {"heal", "heel"},
        {"hear", "here"},   {"him", "hymn"},    {"hole", "whole"},
        {"hour", "our"},    {"know", "no"},     {"knew", "new"},
        {"knight", "night"},{"made", "maid"},   {"mail", "male"},
        {"meat", "meet"},   {"one", "won"},     {"pail", "pale"},
        {"pair", "pear"},   {"peace", "piece"}, {"plain", "plane"},
        {"rain", "reign"},  {"read", "red"},    {"right", "write"},
        {"road", "rode"},   {"role", "roll"},   {"sail", "sale"},
        {"sea", "see"},     {"sew", "so"},      {"some", "sum"},
        {"son", "sun"},     {"stair", "stare"}, {"steal", "steel"},
        {"tail", "tale"},   {"their", "there"}, {"threw", "through"},
        {"to", "two"},      {"wait", "weight"}, {"way", "weigh"},
        {"weak", "week"},   {"wear", "where"},  {"which", "witch"},
        {"wood", "would"},
    };
    ConfusionLexicon lexicon;
    for (const auto& [a, b] : pairs) {
      lexicon[a].push_back(b);
      lexicon[b].push_back(a);
    }
    return lexicon;
  }();
  return kLexicon;
}

ConfusionLexicon load_confusion_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 0, std::string("bad JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(path, 0, "expected a JSON object");
  ConfusionLexicon lexicon;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!it.value().is_array()) {
      throw ParseError(path, 0, "lexicon values must be arrays of words");
    }
    std::vector<std::string> candidates;
    for (const auto& w : it.value()) candidates.push_back(w.get<std::string>());
    lexicon[it.key()] = std::move(candidates);
  }
  return lexicon;
}

}  // namespace asrfix
