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

#ifndef ASRFIX_TEXTNORM_HPP_
#define ASRFIX_TEXTNORM_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace asrfix {

// Deterministic English text normalizer applied to both reference and
// hypothesis before scoring. Steps run in this fixed order:
//
//   1. lowercase            ASCII case fold; curly apostrophes -> '
//   2. strip_annotations    remove (...) and [...]/<...> spans
//   3. expand_contractions  whole-word table lookup ("don't" -> "do not")
//   4. drop_fillers         remove filler tokens ("uh", "um", ...)
//   5. strip_punctuation    apostrophes deleted, other punctuation -> space
//   6. collapse_whitespace  single spaces, no leading/trailing
//
// The default table and filler set reproduce the open-source Whisper
// English normalizer on the subset of behavior documented above (no
// number-word rewriting, no title expansion, no possessive-'s handling);
// tests/golden/normalizer_cases.tsv freezes that correspondence.
struct NormalizerConfig {
  std::map<std::string, std::string> contraction_table;  // lowercase keys
  std::set<std::string> filler_tokens;
  std::vector<std::string> enabled_steps;  // subsequence of canonical order

  static NormalizerConfig defaults();
  static const std::vector<std::string>& canonical_steps();
};

std::string normalize(std::string_view text, const NormalizerConfig& cfg);

NormalizerConfig load_normalizer_config(const std::string& path);
std::string normalizer_config_to_json(const NormalizerConfig& cfg);

}  // namespace asrfix

#endif  // ASRFIX_TEXTNORM_HPP_
