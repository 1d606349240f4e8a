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

#ifndef ASRFIX_METRICS_HPP_
#define ASRFIX_METRICS_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrfix/corpus.hpp"
#include "asrfix/textnorm.hpp"

namespace asrfix {

struct AlignmentStats {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int ref_len = 0;

  int total_edits() const { return substitutions + deletions + insertions; }
  // Only defined for ref_len > 0.
  double wer() const;
};

// Word-level Levenshtein alignment with unit costs. When several edit
// paths are optimal the decomposition is made deterministic: substitution
// (diagonal) is preferred, then whichever of deletion/insertion descends
// from the predecessor with more substitutions, then deletion. That order
// also makes align(a,b) and align(b,a) mirror images (I and D swapped).
AlignmentStats align(std::span<const std::string> ref_words,
                     std::span<const std::string> hyp_words);

struct EvalRow {
  std::string utt_id;
  Speaker speaker = Speaker::kChild;
  std::string condition;
  int ref_len = 0;
  double wer = 0.0;  // uncapped; meaningless when excluded
  bool excluded = false;  // empty normalized reference
  AlignmentStats stats;
};

// Normalizes both sides, whitespace-splits, aligns. An empty normalized
// reference yields an excluded row (WER is undefined at N == 0).
EvalRow wer_utterance(const std::string& utt_id, Speaker speaker,
                      std::string_view ref, std::string_view hyp,
                      const NormalizerConfig& cfg,
                      const std::string& condition);

// Right-open integer ranges partitioning the positive reference lengths;
// the last range is open-ended. Default: {1},{2},...,{10},{11+}.
struct BucketScheme {
  struct Range {
    int lo = 1;
    std::optional<int> hi;  // inclusive; nullopt = open
    std::string label;
  };
  std::vector<Range> ranges;

  static BucketScheme default_scheme();
  // Parses "default" or a comma list of "a", "a-b", "a+" tokens that
  // together cover 1..inf without gaps or overlap.
  static BucketScheme parse(std::string_view text);
  const std::string& label_for(int ref_len) const;
};

struct BucketRow {
  std::string label;
  double macro_wer = 0.0;
  int count = 0;
};

std::vector<BucketRow> bucket_by_length(std::span<const EvalRow> rows,
                                        const BucketScheme& scheme);

struct SpeakerSummary {
  double macro = 0.0;
  double pooled = 0.0;
  int count = 0;
};

struct EvalSummary {
  std::string condition;
  double macro_wer = 0.0;   // mean of per-utterance WER
  double pooled_wer = 0.0;  // sum(S+D+I) / sum(N)
  std::map<Speaker, SpeakerSummary> per_speaker;
  std::vector<BucketRow> buckets;
  int included = 0;
  int excluded_count = 0;
};

// Rows must share one condition tag; excluded rows are tallied but never
// enter the averages. Throws ValidationError when nothing is included.
EvalSummary aggregate(std::span<const EvalRow> rows,
                      const BucketScheme& scheme = BucketScheme::default_scheme());

// utt_id,speaker,condition,ref_len,wer,excluded
void write_eval_rows_csv(std::ostream& out, std::span<const EvalRow> rows);

}  // namespace asrfix

#endif  // ASRFIX_METRICS_HPP_
