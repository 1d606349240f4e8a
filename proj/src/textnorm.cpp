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

#include "asrfix/textnorm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "asrfix/util.hpp"

namespace asrfix {

namespace {

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

bool is_ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

std::string strip_apostrophes(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c != '\'') out += c;
  }
  return out;
}

std::string step_lowercase(std::string_view s) {
  // ASCII case fold; U+2019 (curly apostrophe) folds to ' so the
  // contraction table matches either form.
  std::string out = replace_all(s, "\xe2\x80\x99", "'");
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string step_strip_annotations(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '(') {
      std::size_t close = s.find(')', i + 1);
      if (close != std::string_view::npos) {
        i = close + 1;
        continue;
      }
    } else if (c == '[' || c == '<') {
      std::size_t close = s.find_first_of("]>", i + 1);
      if (close != std::string_view::npos) {
        i = close + 1;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

// Walks [a-z0-9'] token runs, leaving separators untouched.
template <typename Fn>
std::string map_tokens(std::string_view s, Fn&& fn) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_token_char(s[i])) {
      out += s[i++];
      continue;
    }
    std::size_t start = i;
    while (i < s.size() && is_token_char(s[i])) ++i;
    out += fn(s.substr(start, i - start));
  }
  return out;
}

std::string step_expand_contractions(std::string_view s,
                                     const NormalizerConfig& cfg) {
  return map_tokens(s, [&](std::string_view token) -> std::string {
    auto it = cfg.contraction_table.find(std::string(token));
    if (it != cfg.contraction_table.end()) return it->second;
    // Apostrophe-insensitive second chance ("gon'na" -> "gonna") keeps the
    // pipeline idempotent: apostrophes vanish in the punctuation step, and
    // the resulting token must not expand differently on a second pass.
    std::string stripped = strip_apostrophes(token);
    if (stripped.size() != token.size()) {
      it = cfg.contraction_table.find(stripped);
      if (it != cfg.contraction_table.end()) return it->second;
    }
    return std::string(token);
  });
}

std::string step_drop_fillers(std::string_view s, const NormalizerConfig& cfg) {
  return map_tokens(s, [&](std::string_view token) -> std::string {
    if (cfg.filler_tokens.count(std::string(token)) > 0) return "";
    // Same apostrophe insensitivity as contraction matching.
    std::string stripped = strip_apostrophes(token);
    if (stripped.size() != token.size() && cfg.filler_tokens.count(stripped) > 0)
      return "";
    return std::string(token);
  });
}

// Multibyte punctuation replaced by a space, mirroring symbol handling in
// the reference normalizer.
const char* const kUnicodePunctSpace[] = {
    "\xe2\x80\x94",  // em dash
    "\xe2\x80\x93",  // en dash
    "\xe2\x80\x9c",  // left double quote
    "\xe2\x80\x9d",  // right double quote
    "\xe2\x80\x98",  // left single quote
    "\xe2\x80\xa6",  // ellipsis
};

std::string step_strip_punctuation(std::string_view s) {
  std::string text(s);
  for (const char* seq : kUnicodePunctSpace) text = replace_all(text, seq, " ");
  text = replace_all(text, "\xe2\x80\x99", "");  // stray curly apostrophe
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\'') continue;  // "children's" -> "childrens"
    out += is_ascii_punct(c) ? ' ' : c;
  }
  return out;
}

std::string step_collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& NormalizerConfig::canonical_steps() {
  static const std::vector<std::string> kSteps = {
      "lowercase",        "strip_annotations",  "expand_contractions",
      "drop_fillers",     "strip_punctuation",  "collapse_whitespace"};
  return kSteps;
}

NormalizerConfig NormalizerConfig::defaults() {
  NormalizerConfig cfg;
  cfg.enabled_steps = canonical_steps();
  cfg.filler_tokens = {"hmm", "mm", "mhm", "mmm", "uh", "um"};
  cfg.contraction_table = {
      {"ain't", "aint"},
      {"aren't", "are not"},
      {"can't", "can not"},
      {"could've", "could have"},
      {"coulda", "could have"},
      {"couldn't", "could not"},
      {"didn't", "did not"},
      {"doesn't", "does not"},
      {"don't", "do not"},
      {"gonna", "going to"},
      {"gotta", "got to"},
      {"hadn't", "had not"},
      {"hasn't", "has not"},
      {"haven't", "have not"},
      {"he'd", "he would"},
      {"he'll", "he will"},
      {"he's", "he is"},
      {"here's", "here is"},
      {"how's", "how is"},
      {"i'd", "i would"},
      {"i'll", "i will"},
      {"i'm", "i am"},
      {"i'ma", "i am going to"},
      {"i've", "i have"},
      {"imma", "i am going to"},
      {"isn't", "is not"},
      {"it'll", "it will"},
      {"it's", "it is"},
      {"let's", "let us"},
      {"ma'am", "madam"},
      {"mustn't", "must not"},
      {"she'd", "she would"},
      {"she'll", "she will"},
      {"she's", "she is"},
      {"should've", "should have"},
      {"shoulda", "should have"},
      {"shouldn't", "should not"},
      {"that'll", "that will"},
      {"that's", "that is"},
      {"there's", "there is"},
      {"they'd", "they would"},
      {"they'll", "they will"},
      {"they're", "they are"},
      {"they've", "they have"},
      {"wanna", "want to"},
      {"wasn't", "was not"},
      {"we'd", "we would"},
      {"we'll", "we will"},
      {"we're", "we are"},
      {"we've", "we have"},
      {"weren't", "were not"},
      {"what's", "what is"},
      {"where's", "where is"},
      {"who's", "who is"},
      {"won't", "will not"},
      {"would've", "would have"},
      {"woulda", "would have"},
      {"wouldn't", "would not"},
      {"y'all", "you all"},
      {"you'd", "you would"},
      {"you'll", "you will"},
      {"you're", "you are"},
      {"you've", "you have"},
  };
  return cfg;
}

std::string normalize(std::string_view text, const NormalizerConfig& cfg) {
  auto enabled = [&](const char* step) {
    return std::find(cfg.enabled_steps.begin(), cfg.enabled_steps.end(),
                     step) != cfg.enabled_steps.end();
  };
  std::string s(text);
  if (enabled("lowercase")) s = step_lowercase(s);
  if (enabled("strip_annotations")) s = step_strip_annotations(s);
  if (enabled("expand_contractions")) s = step_expand_contractions(s, cfg);
  if (enabled("drop_fillers")) s = step_drop_fillers(s, cfg);
  if (enabled("strip_punctuation")) s = step_strip_punctuation(s);
  if (enabled("collapse_whitespace")) s = step_collapse_whitespace(s);
  return s;
}

namespace {

void validate_config(const NormalizerConfig& cfg, const std::string& origin) {
  const auto& canon = NormalizerConfig::canonical_steps();
  std::size_t cursor = 0;
  for (const auto& step : cfg.enabled_steps) {
    auto it = std::find(canon.begin() + cursor, canon.end(), step);
    if (it == canon.end()) {
      throw ValidationError(origin + ": enabled_steps must be a subsequence of the canonical step order; offending step \"" + step + "\"");
    }
    cursor = static_cast<std::size_t>(it - canon.begin()) + 1;
  }
  for (const auto& [key, value] : cfg.contraction_table) {
    if (key != lowercase_ascii(key)) {
      throw ValidationError(origin + ": contraction table key \"" + key +
                            "\" must be lowercase");
    }
    (void)value;
  }
}

}  // namespace

NormalizerConfig load_normalizer_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 0, std::string("bad JSON: ") + e.what());
  }
  NormalizerConfig cfg = NormalizerConfig::defaults();
  if (auto it = obj.find("contraction_table"); it != obj.end()) {
    cfg.contraction_table.clear();
    for (auto entry = it->begin(); entry != it->end(); ++entry) {
      cfg.contraction_table[entry.key()] = entry.value().get<std::string>();
    }
  }
  if (auto it = obj.find("filler_tokens"); it != obj.end()) {
    cfg.filler_tokens.clear();
    for (const auto& token : *it) cfg.filler_tokens.insert(token.get<std::string>());
  }
  if (auto it = obj.find("enabled_steps"); it != obj.end()) {
    cfg.enabled_steps.clear();
    for (const auto& step : *it) cfg.enabled_steps.push_back(step.get<std::string>());
  }
  validate_config(cfg, path);
  return cfg;
}

std::string normalizer_config_to_json(const NormalizerConfig& cfg) {
  nlohmann::ordered_json obj;
  obj["enabled_steps"] = cfg.enabled_steps;
  obj["filler_tokens"] = cfg.filler_tokens;
  nlohmann::ordered_json table;
  for (const auto& [key, value] : cfg.contraction_table) table[key] = value;
  obj["contraction_table"] = table;
  return obj.dump(2) + "\n";
}

}  // namespace asrfix
