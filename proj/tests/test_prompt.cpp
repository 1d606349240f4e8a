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

#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "asrfix/nbest.hpp"
#include "asrfix/prompt.hpp"
#include "asrfix/util.hpp"
#include "testutil.hpp"

using namespace asrfix;

namespace {

Utterance child_utt(const char* id = "u1", const char* text = "i want to play") {
  Utterance u;
  u.session_id = "s1";
  u.utt_id = id;
  u.index = 0;
  u.speaker = Speaker::kChild;
  u.text = text;
  return u;
}

NBestList two_hyps(const char* id = "u1") {
  NBestList list;
  list.utt_id = id;
  list.hyps = {"i want play", "i went play"};
  return list;
}

}  // namespace

TEST_CASE("build_no_context fills every placeholder") {
  PromptInstance p = build_no_context(child_utt(), two_hyps(),
                                      PromptTemplate::default_no_context());
  CHECK(p.user.find("Child") != std::string::npos);
  CHECK(p.user.find("i want play") != std::string::npos);
  CHECK(p.user.find("i went play") != std::string::npos);
  CHECK(p.user.find('{') == std::string::npos);
  CHECK(p.best_hypothesis == "i want play");
  CHECK(p.context_k == 0);
  CHECK(!p.system.empty());
}

TEST_CASE("build_no_context renders None for a 1-best list") {
  NBestList single;
  single.utt_id = "u1";
  single.hyps = {"only one"};
  PromptInstance p = build_no_context(child_utt(), single,
                                      PromptTemplate::default_no_context());
  CHECK(p.user.find("None") != std::string::npos);
}

TEST_CASE("build_no_context keeps hypotheses in rank order, one per line") {
  NBestList list;
  list.utt_id = "u1";
  list.hyps = {"best", "second", "third", "fourth"};
  PromptInstance p = build_no_context(child_utt(), list,
                                      PromptTemplate::default_no_context());
  CHECK(p.user.find("second\nthird\nfourth") != std::string::npos);
}

TEST_CASE("template validation happens at load time") {
  CHECK_THROWS_AS(PromptTemplate::parse("kind: no_context\n[system]\ns\n[user]\n"
                                        "{speaker} {others} only\n",
                                        "t"),
                  ValidationError);  // missing {best}
  CHECK_THROWS_AS(PromptTemplate::parse("kind: no_context\n[system]\ns\n[user]\n"
                                        "{speaker} {best} {others} {prev_sentences}\n",
                                        "t"),
                  ValidationError);  // context placeholder in no-context kind
  CHECK_THROWS_AS(PromptTemplate::parse("kind: context\n[system]\ns\n[user]\n"
                                        "{speaker} {best} {others}\n",
                                        "t"),
                  ValidationError);  // context kind missing context placeholders
  CHECK_THROWS_AS(PromptTemplate::parse("kind: no_context\n[system]\ns\n[user]\n"
                                        "{speaker} {best} {others} {bogus}\n",
                                        "t"),
                  ValidationError);  // unknown placeholder
  CHECK_THROWS_AS(PromptTemplate::parse("kind: nonsense\n[user]\nx\n", "t"),
                  ValidationError);  // bad header
  CHECK_THROWS_AS(PromptTemplate::parse("kind: no_context\n[system]\n{best}\n[user]\n"
                                        "{speaker} {best} {others}\n",
                                        "t"),
                  ValidationError);  // placeholder in system text
}

TEST_CASE("doubled braces render as literals") {
  PromptTemplate tpl = PromptTemplate::parse(
      "kind: no_context\n[system]\nsys\n[user]\n"
      "{{json}} {speaker} {best} {others}\n",
      "t");
  PromptInstance p = build_no_context(child_utt(), two_hyps(), tpl);
  CHECK(p.user.find("{json}") != std::string::npos);
}

TEST_CASE("build_with_context renders history and sentinel") {
  const PromptTemplate& tpl = PromptTemplate::default_context();

  PromptInstance first = build_with_context(child_utt(), two_hyps(), {}, 1, tpl);
  CHECK(first.user.find("None") != std::string::npos);
  CHECK(first.context_k == 1);

  std::vector<HistoryEntry> history = {
      HistoryEntry{Speaker::kAdult, "how are you"}};
  PromptInstance p = build_with_context(child_utt(), two_hyps(), history, 1, tpl);
  CHECK(p.user.find("Adult: how are you") != std::string::npos);
  CHECK(p.user.find("None") == std::string::npos);

  // k=3 with only 2 entries renders both, no padding.
  std::vector<HistoryEntry> two = {HistoryEntry{Speaker::kAdult, "hello"},
                                   HistoryEntry{Speaker::kChild, "hi"}};
  PromptInstance p3 = build_with_context(child_utt(), two_hyps(), two, 3, tpl);
  CHECK(p3.user.find("Adult: hello\nChild: hi") != std::string::npos);
  CHECK(p3.user.find("previous 3 utterances") != std::string::npos);
}

TEST_CASE("build_with_context rejects bad k and oversized history") {
  const PromptTemplate& tpl = PromptTemplate::default_context();
  CHECK_THROWS_AS(build_with_context(child_utt(), two_hyps(), {}, 2, tpl),
                  ValidationError);
  CHECK_NOTHROW(build_with_context(child_utt(), two_hyps(), {}, 2, tpl,
                                   /*allow_any_k=*/true));
  std::vector<HistoryEntry> two = {HistoryEntry{Speaker::kAdult, "a"},
                                   HistoryEntry{Speaker::kChild, "b"}};
  CHECK_THROWS_AS(build_with_context(child_utt(), two_hyps(), two, 1, tpl),
                  ValidationError);
}

TEST_CASE("kind mismatch is rejected at build time") {
  CHECK_THROWS_AS(build_no_context(child_utt(), two_hyps(),
                                   PromptTemplate::default_context()),
                  ValidationError);
  CHECK_THROWS_AS(build_with_context(child_utt(), two_hyps(), {}, 1,
                                     PromptTemplate::default_no_context()),
                  ValidationError);
}

TEST_CASE("sft dataset carries verbatim references and ground-truth context") {
  Corpus corpus = testutil::make_corpus(99, 1, 3, 3);
  REQUIRE(corpus.utterances.size() == 3);
  corpus.utterances[1].text = "Ground Truth, unnormalized!";
  std::vector<NBestList> lists;
  for (const auto& u : corpus.utterances) {
    NBestList list;
    list.utt_id = u.utt_id;
    list.hyps = {"hyp for " + u.utt_id, "alt for " + u.utt_id};
    lists.push_back(list);
  }
  NBestIndex nbests(lists);

  std::vector<SftRecord> no_ctx = emit_sft_dataset(
      corpus, nbests, 0, PromptTemplate::default_no_context());
  REQUIRE(no_ctx.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(no_ctx[i].assistant == corpus.utterances[i].text);
  }

  std::vector<SftRecord> ctx = emit_sft_dataset(
      corpus, nbests, 1, PromptTemplate::default_context());
  // Record for utterance index 2 carries the ground-truth text of index 1,
  // not its hypothesis.
  CHECK(ctx[2].user.find("Ground Truth, unnormalized!") != std::string::npos);
  CHECK(ctx[2].user.find("hyp for " + corpus.utterances[1].utt_id) ==
        std::string::npos);
  CHECK(ctx[0].user.find("None") != std::string::npos);

  Corpus empty;
  CHECK(emit_sft_dataset(empty, nbests, 0, PromptTemplate::default_no_context())
            .empty());

  Corpus extra = corpus;
  Utterance u;
  u.session_id = "zz";
  u.utt_id = "missing";
  u.index = 0;
  u.text = "x";
  extra.utterances.push_back(u);
  CHECK_THROWS_AS(emit_sft_dataset(extra, nbests, 0,
                                   PromptTemplate::default_no_context()),
                  ValidationError);
}

TEST_CASE("sft jsonl rows are chat messages") {
  SftRecord record{"sys", "user text", "assistant text"};
  std::ostringstream out;
  write_sft_jsonl(out, std::vector<SftRecord>{record});
  nlohmann::json obj = nlohmann::json::parse(out.str());
  REQUIRE(obj["messages"].size() == 3);
  CHECK(obj["messages"][0]["role"] == "system");
  CHECK(obj["messages"][1]["role"] == "user");
  CHECK(obj["messages"][2]["role"] == "assistant");
  CHECK(obj["messages"][2]["content"] == "assistant text");
}

TEST_CASE("no-context rendering is independent of session ordering") {
  Utterance utt = child_utt();
  PromptInstance a = build_no_context(utt, two_hyps(),
                                      PromptTemplate::default_no_context());
  utt.index = 17;
  utt.session_id = "other";
  PromptInstance b = build_no_context(utt, two_hyps(),
                                      PromptTemplate::default_no_context());
  CHECK(a.user == b.user);
  CHECK(a.system == b.system);
}
