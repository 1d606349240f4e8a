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

#ifndef ASRFIX_NBEST_HPP_
#define ASRFIX_NBEST_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asrfix {

// Ranked ASR hypotheses for one utterance; list order is rank order,
// hyps[0] is the decoder's best guess.
struct NBestList {
  std::string utt_id;
  std::vector<std::string> hyps;                 // 1..10 entries
  std::optional<std::vector<double>> scores;     // weakly descending
  std::string source;                            // e.g. "wsp-l-t-zeroshot"

  const std::string& best() const { return hyps.front(); }
};

// utt_id -> list, as read from one nbest.jsonl manifest.
class NBestIndex {
 public:
  NBestIndex() = default;
  explicit NBestIndex(std::vector<NBestList> lists);

  const NBestList* find(std::string_view utt_id) const;
  // Throws ValidationError naming the utt_id when absent.
  const NBestList& at(std::string_view utt_id) const;
  std::size_t size() const { return by_id_.size(); }

 private:
  std::map<std::string, NBestList, std::less<>> by_id_;
};

void validate_nbest(const NBestList& list);

NBestIndex load_nbest(const std::string& path);
void write_nbest(const std::vector<NBestList>& lists, const std::string& path);

}  // namespace asrfix

#endif  // ASRFIX_NBEST_HPP_
