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

#ifndef ASRFIX_CORPUS_HPP_
#define ASRFIX_CORPUS_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asrfix {

enum class Speaker { kChild, kAdult };

// "child"/"adult" on disk, "Child"/"Adult" in prompts.
Speaker speaker_from_manifest(std::string_view s);
std::string_view speaker_manifest_name(Speaker s);
std::string_view speaker_display_name(Speaker s);

// One turn of one speaker in one session.
struct Utterance {
  std::string session_id;
  std::string utt_id;
  int index = 0;  // position within the session
  Speaker speaker = Speaker::kChild;
  std::string text;  // reference transcript
  std::optional<double> duration_s;
};

enum class SplitTag { kTrain, kTest, kUnsplit };

struct Corpus {
  std::string name;
  SplitTag split_tag = SplitTag::kUnsplit;
  // Sorted by (session_id, index); utt_ids unique.
  std::vector<Utterance> utterances;

  // Set by filter_max_duration; kept so gaps in session indices are
  // explainable downstream.
  bool duration_filtered = false;

  // Distinct session ids in corpus order.
  std::vector<std::string> session_ids() const;
  // Contiguous run of utterances belonging to one session.
  std::span<const Utterance> session(std::string_view session_id) const;
  const Utterance* find(std::string_view utt_id) const;
};

struct FoldAssignment {
  std::set<std::string> fold_a;
  std::set<std::string> fold_b;
  std::uint64_t seed = 0;
};

// Loaded manifests normally require each session to cover indices 0..m-1
// with no gaps; manifests written after a duration filter keep their
// original indices, so re-loading those needs kAllowGaps (indices must
// still be strictly increasing per session).
enum class IndexPolicy { kStrict, kAllowGaps };

Corpus load_manifest(const std::string& path,
                     IndexPolicy policy = IndexPolicy::kStrict);
void write_manifest(const Corpus& corpus, const std::string& path);

struct FilterReport {
  int kept = 0;
  int removed = 0;
  int no_duration = 0;  // retained utterances with absent duration_s
};

// Drops utterances with duration_s strictly greater than max_s. Missing
// durations are retained. Indices are not renumbered.
Corpus filter_max_duration(const Corpus& corpus, double max_s = 30.0,
                           FilterReport* report = nullptr);

// Seed-deterministic session-level 2-fold split; fold sizes differ by at
// most one session. Requires >= 2 sessions.
FoldAssignment split_two_fold(const Corpus& corpus, std::uint64_t seed);

}  // namespace asrfix

#endif  // ASRFIX_CORPUS_HPP_
