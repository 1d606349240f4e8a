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

#include <cstdio>
#include <fstream>
#include <string>

#include <doctest.h>

#include "asrfix/rng.hpp"
#include "asrfix/textnorm.hpp"
#include "asrfix/util.hpp"
#include "testutil.hpp"

using namespace asrfix;

namespace {

// Printable ASCII plus some unicode punctuation; exercises every step.
std::string random_text(Rng& rng) {
  static const std::string kMultibyte[] = {
      "\xe2\x80\x94", "\xe2\x80\x93", "\xe2\x80\x9c",
      "\xe2\x80\x9d", "\xe2\x80\x99", "\xc3\xa9"};
  std::size_t length = rng.below(60);
  std::string out;
  for (std::size_t i = 0; i < length; ++i) {
    if (rng.below(12) == 0) {
      out += kMultibyte[rng.below(std::size(kMultibyte))];
    } else {
      out += static_cast<char>(0x20 + rng.below(0x5f));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("normalize basic examples") {
  NormalizerConfig cfg = NormalizerConfig::defaults();
  CHECK(normalize("Hello, World!", cfg) == "hello world");
  CHECK(normalize("  multiple   spaces ", cfg) == "multiple spaces");
  CHECK(normalize("I'm OK \xe2\x80\x94 don't worry.", cfg) ==
        "i am ok do not worry");
  CHECK(normalize("", cfg) == "");
  CHECK(normalize("(laughs)", cfg) == "");
  CHECK(normalize("children's", cfg) == "childrens");
  CHECK(normalize("don\xe2\x80\x99t", cfg) == "do not");
}

TEST_CASE("normalizer golden file passes exactly") {
  NormalizerConfig cfg = NormalizerConfig::defaults();
  auto cases = testutil::load_golden_cases(
      std::string(ASRFIX_GOLDEN_DIR) + "/normalizer_cases.tsv");
  REQUIRE(cases.size() == 50);
  for (const auto& [input, expected] : cases) {
    CAPTURE(input);
    CHECK(normalize(input, cfg) == expected);
  }
}

TEST_CASE("normalize is idempotent on random strings") {
  NormalizerConfig cfg = NormalizerConfig::defaults();
  Rng rng(192837);
  for (int i = 0; i < 2000; ++i) {
    std::string text = random_text(rng);
    std::string once = normalize(text, cfg);
    CAPTURE(text);
    CHECK(normalize(once, cfg) == once);
  }
}

TEST_CASE("normalize output alphabet") {
  NormalizerConfig cfg = NormalizerConfig::defaults();
  Rng rng(5551);
  for (int i = 0; i < 500; ++i) {
    std::string out = normalize(random_text(rng), cfg);
    CHECK(out == std::string(trim(out)));
    CHECK(out.find("  ") == std::string::npos);
    for (char c : out) {
      unsigned char u = static_cast<unsigned char>(c);
      if (u >= 0x80) continue;  // passthrough bytes of unknown sequences
      CHECK(!(c >= 'A' && c <= 'Z'));
      bool allowed = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ';
      CAPTURE((int)c);
      CHECK(allowed);
    }
  }
}

TEST_CASE("normalizer config round-trips and honors disabled steps") {
  NormalizerConfig cfg = NormalizerConfig::defaults();
  std::string path = "tmp_norm_config.json";
  {
    std::ofstream out(path);
    out << normalizer_config_to_json(cfg);
  }
  NormalizerConfig reloaded = load_normalizer_config(path);
  CHECK(reloaded.contraction_table == cfg.contraction_table);
  CHECK(reloaded.filler_tokens == cfg.filler_tokens);
  CHECK(reloaded.enabled_steps == cfg.enabled_steps);
  std::remove(path.c_str());

  NormalizerConfig partial = cfg;
  partial.enabled_steps = {"lowercase", "collapse_whitespace"};
  CHECK(normalize("UM Hello, World!", partial) == "um hello, world!");
}

TEST_CASE("normalizer config rejects out-of-order steps") {
  NormalizerConfig cfg = NormalizerConfig::defaults();
  cfg.enabled_steps = {"strip_punctuation", "lowercase"};
  std::string path = "tmp_norm_config_bad.json";
  {
    std::ofstream out(path);
    out << normalizer_config_to_json(cfg);
  }
  CHECK_THROWS_AS(load_normalizer_config(path), ValidationError);
  std::remove(path.c_str());
}
