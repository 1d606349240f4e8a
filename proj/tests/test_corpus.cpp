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
#include <set>
#include <string>

#include <doctest.h>

#include "asrfix/corpus.hpp"
#include "asrfix/util.hpp"
#include "testutil.hpp"

using namespace asrfix;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents)
      : path("tmp_corpus_" + name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

const char kThreeLineManifest[] =
    R"({"session_id":"s1","utt_id":"u1","index":0,"speaker":"child","text":"hi there","duration_s":1.5})"
    "\n"
    R"({"session_id":"s2","utt_id":"u3","index":0,"speaker":"child","text":"bye"})"
    "\n"
    R"({"session_id":"s1","utt_id":"u2","index":1,"speaker":"adult","text":"hello","duration_s":2.0})"
    "\n";

}  // namespace

TEST_CASE("load_manifest orders by session and index") {
  TempFile f("basic.jsonl", kThreeLineManifest);
  Corpus corpus = load_manifest(f.path);
  REQUIRE(corpus.utterances.size() == 3);
  CHECK(corpus.utterances[0].utt_id == "u1");
  CHECK(corpus.utterances[1].utt_id == "u2");
  CHECK(corpus.utterances[2].utt_id == "u3");
  CHECK(corpus.utterances[1].speaker == Speaker::kAdult);
  CHECK(corpus.session_ids() == std::vector<std::string>{"s1", "s2"});
  CHECK(corpus.session("s1").size() == 2);
  CHECK(corpus.session("missing").empty());
  CHECK(corpus.find("u3") != nullptr);
  CHECK(!corpus.utterances[2].duration_s.has_value());
}

TEST_CASE("load_manifest rejects duplicate utt_id naming both lines") {
  TempFile f("dup.jsonl",
             R"({"session_id":"s1","utt_id":"u7","index":0,"speaker":"child","text":"a"})"
             "\n"
             R"({"session_id":"s1","utt_id":"u7","index":1,"speaker":"adult","text":"b"})"
             "\n");
  try {
    load_manifest(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string message = e.what();
    CHECK(message.find("u7") != std::string::npos);
    CHECK(message.find("line 1") != std::string::npos);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("load_manifest on an empty file yields an empty corpus") {
  TempFile f("empty.jsonl", "");
  Corpus corpus = load_manifest(f.path);
  CHECK(corpus.utterances.empty());
}

TEST_CASE("load_manifest reports malformed lines by number") {
  TempFile f("bad.jsonl",
             R"({"session_id":"s1","utt_id":"u1","index":0,"speaker":"child","text":"a"})"
             "\n{not json\n");
  try {
    load_manifest(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("load_manifest rejects unknown speaker values") {
  TempFile f("speaker.jsonl",
             R"({"session_id":"s1","utt_id":"u1","index":0,"speaker":"robot","text":"a"})"
             "\n");
  CHECK_THROWS_AS(load_manifest(f.path), ParseError);
}

TEST_CASE("load_manifest enforces contiguous indices unless relaxed") {
  TempFile f("gap.jsonl",
             R"({"session_id":"s1","utt_id":"u1","index":0,"speaker":"child","text":"a"})"
             "\n"
             R"({"session_id":"s1","utt_id":"u2","index":2,"speaker":"adult","text":"b"})"
             "\n");
  CHECK_THROWS_AS(load_manifest(f.path), ParseError);
  Corpus corpus = load_manifest(f.path, IndexPolicy::kAllowGaps);
  CHECK(corpus.utterances.size() == 2);
  // Duplicate indices stay fatal even with gaps allowed.
  TempFile g("dupidx.jsonl",
             R"({"session_id":"s1","utt_id":"u1","index":1,"speaker":"child","text":"a"})"
             "\n"
             R"({"session_id":"s1","utt_id":"u2","index":1,"speaker":"adult","text":"b"})"
             "\n");
  CHECK_THROWS_AS(load_manifest(g.path, IndexPolicy::kAllowGaps), ParseError);
}

TEST_CASE("manifest round-trips through write and load") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    Corpus corpus = testutil::make_corpus(seed, 4);
    TempFile f("roundtrip_" + std::to_string(seed) + ".jsonl", "");
    write_manifest(corpus, f.path);
    Corpus reloaded = load_manifest(f.path);
    REQUIRE(reloaded.utterances.size() == corpus.utterances.size());
    for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
      const Utterance& a = corpus.utterances[i];
      const Utterance& b = reloaded.utterances[i];
      CHECK(a.session_id == b.session_id);
      CHECK(a.utt_id == b.utt_id);
      CHECK(a.index == b.index);
      CHECK(a.speaker == b.speaker);
      CHECK(a.text == b.text);
      CHECK(a.duration_s == b.duration_s);
    }
  }
}

TEST_CASE("filter_max_duration keeps 30.0 and drops 31.0") {
  Corpus corpus;
  auto add = [&](const char* id, std::optional<double> dur) {
    Utterance u;
    u.session_id = "s1";
    u.utt_id = id;
    u.index = static_cast<int>(corpus.utterances.size());
    u.text = "x";
    u.duration_s = dur;
    corpus.utterances.push_back(u);
  };
  add("a", 31.0);
  add("b", 30.0);
  add("c", std::nullopt);
  FilterReport report;
  Corpus filtered = filter_max_duration(corpus, 30.0, &report);
  REQUIRE(filtered.utterances.size() == 2);
  CHECK(filtered.utterances[0].utt_id == "b");
  CHECK(report.removed == 1);
  CHECK(report.no_duration == 1);
  CHECK(report.kept == 2);
  CHECK(filtered.duration_filtered);
  // Indices keep their original values, gaps included.
  CHECK(filtered.utterances[0].index == 1);
  CHECK(filtered.utterances[1].index == 2);

  // Idempotence.
  Corpus again = filter_max_duration(filtered, 30.0);
  REQUIRE(again.utterances.size() == filtered.utterances.size());
  for (std::size_t i = 0; i < again.utterances.size(); ++i) {
    CHECK(again.utterances[i].utt_id == filtered.utterances[i].utt_id);
  }
}

TEST_CASE("split_two_fold balances sessions and is deterministic") {
  Corpus ten = testutil::make_corpus(11, 10);
  FoldAssignment folds = split_two_fold(ten, 42);
  CHECK(folds.fold_a.size() == 5);
  CHECK(folds.fold_b.size() == 5);

  Corpus eleven = testutil::make_corpus(12, 11);
  FoldAssignment folds11 = split_two_fold(eleven, 42);
  CHECK(folds11.fold_a.size() == 6);
  CHECK(folds11.fold_b.size() == 5);

  FoldAssignment repeat = split_two_fold(ten, 42);
  CHECK(repeat.fold_a == folds.fold_a);
  CHECK(repeat.fold_b == folds.fold_b);
  FoldAssignment other_seed = split_two_fold(ten, 43);
  CHECK(other_seed.fold_a != folds.fold_a);  // overwhelmingly likely
}

TEST_CASE("split_two_fold rejects corpora with fewer than two sessions") {
  Corpus one = testutil::make_corpus(13, 1);
  CHECK_THROWS_AS(split_two_fold(one, 7), ValidationError);
}

TEST_CASE("split_two_fold partitions the session set") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Corpus corpus = testutil::make_corpus(seed, 2 + static_cast<int>(seed % 9));
    FoldAssignment folds = split_two_fold(corpus, seed * 31 + 7);
    std::set<std::string> all(folds.fold_a.begin(), folds.fold_a.end());
    for (const auto& id : folds.fold_b) {
      CHECK(all.insert(id).second);  // disjoint
    }
    auto sessions = corpus.session_ids();
    CHECK(all.size() == sessions.size());
    for (const auto& id : sessions) CHECK(all.count(id) == 1);
    long diff = static_cast<long>(folds.fold_a.size()) -
                static_cast<long>(folds.fold_b.size());
    CHECK(diff >= -1);
    CHECK(diff <= 1);
  }
}
