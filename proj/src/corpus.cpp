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

#include "asrfix/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include <json.hpp>

#include "asrfix/jsonl.hpp"
#include "asrfix/rng.hpp"
#include "asrfix/util.hpp"

namespace asrfix {

Speaker speaker_from_manifest(std::string_view s) {
  if (s == "child") return Speaker::kChild;
  if (s == "adult") return Speaker::kAdult;
  throw ValidationError("unknown speaker value \"" + std::string(s) +
                        "\" (expected \"child\" or \"adult\")");
}

std::string_view speaker_manifest_name(Speaker s) {
  return s == Speaker::kChild ? "child" : "adult";
}

std::string_view speaker_display_name(Speaker s) {
  return s == Speaker::kChild ? "Child" : "Adult";
}

std::vector<std::string> Corpus::session_ids() const {
  std::vector<std::string> ids;
  for (const auto& u : utterances) {
    if (ids.empty() || ids.back() != u.session_id) ids.push_back(u.session_id);
  }
  return ids;
}

std::span<const Utterance> Corpus::session(std::string_view session_id) const {
  auto begin = std::find_if(utterances.begin(), utterances.end(),
                            [&](const Utterance& u) {
                              return u.session_id == session_id;
                            });
  if (begin == utterances.end()) return {};
  auto end = std::find_if(begin, utterances.end(), [&](const Utterance& u) {
    return u.session_id != session_id;
  });
  return {&*begin, static_cast<std::size_t>(end - begin)};
}

const Utterance* Corpus::find(std::string_view utt_id) const {
  for (const auto& u : utterances) {
    if (u.utt_id == utt_id) return &u;
  }
  return nullptr;
}

namespace {

const char* const kKnownFields[] = {"session_id", "utt_id", "index",
                                    "speaker",    "text",   "duration_s"};

void check_session_indices(const Corpus& corpus, const std::string& path,
                           IndexPolicy policy) {
  std::string current;
  int prev_index = -1;
  for (const auto& u : corpus.utterances) {
    if (u.session_id != current) {
      current = u.session_id;
      prev_index = -1;
    }
    if (u.index <= prev_index) {
      throw ParseError(path, 0,
                       "session \"" + current + "\": duplicate or unsorted index " +
                           std::to_string(u.index));
    }
    if (policy == IndexPolicy::kStrict && u.index != prev_index + 1) {
      throw ParseError(path, 0,
                       "session \"" + current + "\": indices not contiguous (" +
                           std::to_string(prev_index + 1) + " expected, got " +
                           std::to_string(u.index) + ")");
    }
    prev_index = u.index;
  }
}

}  // namespace

Corpus load_manifest(const std::string& path, IndexPolicy policy) {
  Corpus corpus;
  corpus.name = path;
  std::map<std::string, std::size_t> line_of_id;
  std::set<std::string> warned_fields;

  for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    Utterance u;
    u.session_id = require_string(obj, "session_id", path, line_no);
    u.utt_id = require_string(obj, "utt_id", path, line_no);
    long index = require_int(obj, "index", path, line_no);
    if (index < 0) throw ParseError(path, line_no, "negative index");
    u.index = static_cast<int>(index);
    try {
      u.speaker = speaker_from_manifest(require_string(obj, "speaker", path, line_no));
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
    u.text = require_string(obj, "text", path, line_no);
    if (auto it = obj.find("duration_s"); it != obj.end() && !it->is_null()) {
      if (!it->is_number()) throw ParseError(path, line_no, "duration_s must be a number");
      double d = it->get<double>();
      if (d < 0) throw ParseError(path, line_no, "negative duration_s");
      u.duration_s = d;
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = std::any_of(std::begin(kKnownFields), std::end(kKnownFields),
                               [&](const char* f) { return it.key() == f; });
      if (!known && warned_fields.insert(it.key()).second) {
        std::cerr << "warning: " << path << ": ignoring unknown field \""
                  << it.key() << "\"\n";
      }
    }
    auto [at, inserted] = line_of_id.emplace(u.utt_id, line_no);
    if (!inserted) {
      throw ParseError(path, line_no,
                       "duplicate utt_id \"" + u.utt_id + "\" (first seen at line " +
                           std::to_string(at->second) + ")");
    }
    corpus.utterances.push_back(std::move(u));
  });

  std::stable_sort(corpus.utterances.begin(), corpus.utterances.end(),
                   [](const Utterance& a, const Utterance& b) {
                     if (a.session_id != b.session_id)
                       return a.session_id < b.session_id;
                     return a.index < b.index;
                   });
  check_session_indices(corpus, path, policy);
  return corpus;
}

void write_manifest(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto& u : corpus.utterances) {
    nlohmann::ordered_json obj;
    obj["session_id"] = u.session_id;
    obj["utt_id"] = u.utt_id;
    obj["index"] = u.index;
    obj["speaker"] = speaker_manifest_name(u.speaker);
    obj["text"] = u.text;
    if (u.duration_s) obj["duration_s"] = *u.duration_s;
    out << obj.dump() << '\n';
  }
}

Corpus filter_max_duration(const Corpus& corpus, double max_s,
                           FilterReport* report) {
  Corpus out;
  out.name = corpus.name;
  out.split_tag = corpus.split_tag;
  out.duration_filtered = true;
  FilterReport local;
  for (const auto& u : corpus.utterances) {
    if (u.duration_s && *u.duration_s > max_s) {
      ++local.removed;
      continue;
    }
    if (!u.duration_s) ++local.no_duration;
    ++local.kept;
    out.utterances.push_back(u);
  }
  if (report) *report = local;
  return out;
}

FoldAssignment split_two_fold(const Corpus& corpus, std::uint64_t seed) {
  std::vector<std::string> sessions = corpus.session_ids();
  if (sessions.size() < 2) {
    throw ValidationError("2-fold split needs at least 2 sessions, corpus has " +
                          std::to_string(sessions.size()));
  }
  std::sort(sessions.begin(), sessions.end());
  // Hand-rolled Fisher-Yates: std::shuffle output is not specified by the
  // standard, and fold assignments must be reproducible across platforms.
  Rng rng(seed);
  for (std::size_t i = sessions.size() - 1; i > 0; --i) {
    std::swap(sessions[i], sessions[rng.below(i + 1)]);
  }
  FoldAssignment folds;
  folds.seed = seed;
  std::size_t half = (sessions.size() + 1) / 2;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    (i < half ? folds.fold_a : folds.fold_b).insert(sessions[i]);
  }
  return folds;
}

}  // namespace asrfix
