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

#include "asrfix/nbest.hpp"

#include <fstream>

#include <json.hpp>

#include "asrfix/jsonl.hpp"
#include "asrfix/util.hpp"

namespace asrfix {

NBestIndex::NBestIndex(std::vector<NBestList> lists) {
  for (auto& list : lists) {
    validate_nbest(list);
    std::string key = list.utt_id;
    auto [it, inserted] = by_id_.emplace(std::move(key), std::move(list));
    if (!inserted) {
      throw ValidationError("duplicate N-best list for utt_id \"" +
                            it->first + "\"");
    }
  }
}

const NBestList* NBestIndex::find(std::string_view utt_id) const {
  auto it = by_id_.find(utt_id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const NBestList& NBestIndex::at(std::string_view utt_id) const {
  const NBestList* list = find(utt_id);
  if (!list) {
    throw ValidationError("no N-best list for utt_id \"" + std::string(utt_id) +
                          "\"");
  }
  return *list;
}

void validate_nbest(const NBestList& list) {
  if (list.hyps.empty() || list.hyps.size() > 10) {
    throw ValidationError("utt_id \"" + list.utt_id + "\": N-best list must hold 1..10 hypotheses, has " +
                          std::to_string(list.hyps.size()));
  }
  if (list.scores) {
    if (list.scores->size() != list.hyps.size()) {
      throw ValidationError("utt_id \"" + list.utt_id + "\": scores length != hyps length");
    }
    for (std::size_t i = 1; i < list.scores->size(); ++i) {
      if ((*list.scores)[i] > (*list.scores)[i - 1]) {
        throw ValidationError("utt_id \"" + list.utt_id + "\": scores must be weakly descending");
      }
    }
  }
}

NBestIndex load_nbest(const std::string& path) {
  std::vector<NBestList> lists;
  for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    NBestList list;
    list.utt_id = require_string(obj, "utt_id", path, line_no);
    auto hyps = obj.find("hyps");
    if (hyps == obj.end() || !hyps->is_array()) {
      throw ParseError(path, line_no, "missing or non-array field \"hyps\"");
    }
    for (const auto& h : *hyps) {
      if (!h.is_string()) throw ParseError(path, line_no, "hyps entries must be strings");
      list.hyps.push_back(h.get<std::string>());
    }
    if (auto it = obj.find("scores"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) throw ParseError(path, line_no, "scores must be an array");
      std::vector<double> scores;
      for (const auto& s : *it) {
        if (!s.is_number()) throw ParseError(path, line_no, "scores entries must be numbers");
        scores.push_back(s.get<double>());
      }
      list.scores = std::move(scores);
    }
    if (auto it = obj.find("source"); it != obj.end() && it->is_string()) {
      list.source = it->get<std::string>();
    }
    try {
      validate_nbest(list);
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
    lists.push_back(std::move(list));
  });
  return NBestIndex(std::move(lists));
}

void write_nbest(const std::vector<NBestList>& lists, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto& list : lists) {
    nlohmann::ordered_json obj;
    obj["utt_id"] = list.utt_id;
    obj["hyps"] = list.hyps;
    if (list.scores) obj["scores"] = *list.scores;
    obj["source"] = list.source;
    out << obj.dump() << '\n';
  }
}

}  // namespace asrfix
