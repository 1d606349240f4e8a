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

#include "asrfix/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

#include "asrfix/util.hpp"

namespace asrfix {

double AlignmentStats::wer() const {
  if (ref_len <= 0) throw ValidationError("WER undefined for empty reference");
  return static_cast<double>(total_edits()) / static_cast<double>(ref_len);
}

namespace {

struct Cell {
  int dist = 0;
  int subs = 0;
  int dels = 0;
  int ins = 0;
};

}  // namespace

AlignmentStats align(std::span<const std::string> ref_words,
                     std::span<const std::string> hyp_words) {
  const std::size_t n = ref_words.size();
  const std::size_t m = hyp_words.size();
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (std::size_t j = 1; j <= m; ++j) {
    prev[j].dist = static_cast<int>(j);
    prev[j].ins = static_cast<int>(j);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0].dist = static_cast<int>(i);
    cur[0].subs = 0;
    cur[0].dels = static_cast<int>(i);
    cur[0].ins = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      bool match = ref_words[i - 1] == hyp_words[j - 1];
      int diag = prev[j - 1].dist + (match ? 0 : 1);
      int up = prev[j].dist + 1;    // deletion: ref word unmatched
      int left = cur[j - 1].dist + 1;  // insertion: hyp word unmatched
      int best = std::min({diag, up, left});
      Cell c;
      c.dist = best;
      if (diag == best) {
        // Substitution preferred on ties.
        c = prev[j - 1];
        c.dist = best;
        if (!match) ++c.subs;
      } else if (up == best && left == best) {
        // Equal-cost deletion/insertion: take the predecessor with more
        // substitutions (keeps align(a,b) the exact mirror of align(b,a)),
        // then deletion.
        if (cur[j - 1].subs > prev[j].subs) {
          c = cur[j - 1];
          c.dist = best;
          ++c.ins;
        } else {
          c = prev[j];
          c.dist = best;
          ++c.dels;
        }
      } else if (up == best) {
        c = prev[j];
        c.dist = best;
        ++c.dels;
      } else {
        c = cur[j - 1];
        c.dist = best;
        ++c.ins;
      }
      cur[j] = c;
    }
    std::swap(prev, cur);
  }
  const Cell& final_cell = prev[m];
  AlignmentStats stats;
  stats.substitutions = final_cell.subs;
  stats.deletions = final_cell.dels;
  stats.insertions = final_cell.ins;
  stats.ref_len = static_cast<int>(n);
  return stats;
}

EvalRow wer_utterance(const std::string& utt_id, Speaker speaker,
                      std::string_view ref, std::string_view hyp,
                      const NormalizerConfig& cfg,
                      const std::string& condition) {
  EvalRow row;
  row.utt_id = utt_id;
  row.speaker = speaker;
  row.condition = condition;
  std::vector<std::string> ref_words = split_whitespace(normalize(ref, cfg));
  if (ref_words.empty()) {
    row.excluded = true;
    return row;
  }
  std::vector<std::string> hyp_words = split_whitespace(normalize(hyp, cfg));
  row.stats = align(ref_words, hyp_words);
  row.ref_len = row.stats.ref_len;
  row.wer = row.stats.wer();
  return row;
}

BucketScheme BucketScheme::default_scheme() {
  return parse("1,2,3,4,5,6,7,8,9,10,11+");
}

BucketScheme BucketScheme::parse(std::string_view text) {
  if (trim(text) == "default") return default_scheme();
  BucketScheme scheme;
  int expected_lo = 1;
  std::stringstream ss{std::string(text)};
  std::string token;
  bool open_seen = false;
  while (std::getline(ss, token, ',')) {
    std::string t{trim(token)};
    if (t.empty()) throw ValidationError("bucket scheme: empty range");
    if (open_seen) throw ValidationError("bucket scheme: ranges after an open-ended range");
    Range range;
    range.label = t;
    auto parse_int = [&](std::string_view digits) {
      int value = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || value <= 0) {
        throw ValidationError("bucket scheme: bad number in \"" + t + "\"");
      }
      return value;
    };
    if (t.back() == '+') {
      range.lo = parse_int(std::string_view(t).substr(0, t.size() - 1));
      range.hi = std::nullopt;
      open_seen = true;
    } else if (auto dash = t.find('-'); dash != std::string::npos) {
      range.lo = parse_int(std::string_view(t).substr(0, dash));
      range.hi = parse_int(std::string_view(t).substr(dash + 1));
      if (*range.hi < range.lo) throw ValidationError("bucket scheme: inverted range \"" + t + "\"");
    } else {
      range.lo = parse_int(t);
      range.hi = range.lo;
    }
    if (range.lo != expected_lo) {
      throw ValidationError("bucket scheme: ranges must partition 1..inf; expected start " +
                            std::to_string(expected_lo) + ", got \"" + t + "\"");
    }
    expected_lo = range.hi ? *range.hi + 1 : expected_lo;
    scheme.ranges.push_back(std::move(range));
  }
  if (scheme.ranges.empty()) throw ValidationError("bucket scheme: empty");
  if (!open_seen) {
    throw ValidationError("bucket scheme: last range must be open-ended (\"N+\")");
  }
  return scheme;
}

const std::string& BucketScheme::label_for(int ref_len) const {
  for (const auto& range : ranges) {
    if (ref_len >= range.lo && (!range.hi || ref_len <= *range.hi)) {
      return range.label;
    }
  }
  throw ValidationError("bucket scheme does not cover length " +
                        std::to_string(ref_len));
}

std::vector<BucketRow> bucket_by_length(std::span<const EvalRow> rows,
                                        const BucketScheme& scheme) {
  std::vector<BucketRow> table;
  table.reserve(scheme.ranges.size());
  for (const auto& range : scheme.ranges) {
    table.push_back(BucketRow{range.label, 0.0, 0});
  }
  std::vector<double> sums(table.size(), 0.0);
  for (const auto& row : rows) {
    if (row.excluded) continue;
    const std::string& label = scheme.label_for(row.ref_len);
    for (std::size_t b = 0; b < table.size(); ++b) {
      if (table[b].label == label) {
        sums[b] += row.wer;
        ++table[b].count;
        break;
      }
    }
  }
  for (std::size_t b = 0; b < table.size(); ++b) {
    if (table[b].count > 0) table[b].macro_wer = sums[b] / table[b].count;
  }
  return table;
}

EvalSummary aggregate(std::span<const EvalRow> rows, const BucketScheme& scheme) {
  if (rows.empty()) throw ValidationError("aggregate: empty row set");
  EvalSummary summary;
  summary.condition = rows.front().condition;
  double wer_sum = 0.0;
  long edit_sum = 0, ref_sum = 0;
  std::map<Speaker, std::pair<double, std::pair<long, long>>> speaker_acc;
  for (const auto& row : rows) {
    if (row.condition != summary.condition) {
      throw ValidationError("aggregate: mixed condition tags (\"" + summary.condition +
                            "\" vs \"" + row.condition + "\")");
    }
    if (row.excluded) {
      ++summary.excluded_count;
      continue;
    }
    ++summary.included;
    wer_sum += row.wer;
    edit_sum += row.stats.total_edits();
    ref_sum += row.ref_len;
    auto& acc = speaker_acc[row.speaker];
    acc.first += row.wer;
    acc.second.first += row.stats.total_edits();
    acc.second.second += row.ref_len;
  }
  if (summary.included == 0) {
    throw ValidationError("aggregate: no scorable rows (all excluded)");
  }
  summary.macro_wer = wer_sum / summary.included;
  summary.pooled_wer = static_cast<double>(edit_sum) / static_cast<double>(ref_sum);
  for (const auto& [speaker, acc] : speaker_acc) {
    SpeakerSummary s;
    int count = 0;
    for (const auto& row : rows) {
      if (!row.excluded && row.speaker == speaker) ++count;
    }
    s.count = count;
    s.macro = acc.first / count;
    s.pooled = static_cast<double>(acc.second.first) /
               static_cast<double>(acc.second.second);
    summary.per_speaker[speaker] = s;
  }
  summary.buckets = bucket_by_length(rows, scheme);
  return summary;
}

void write_eval_rows_csv(std::ostream& out, std::span<const EvalRow> rows) {
  out << "utt_id,speaker,condition,ref_len,wer,excluded\n";
  for (const auto& row : rows) {
    out << row.utt_id << ',' << speaker_manifest_name(row.speaker) << ','
        << row.condition << ',' << row.ref_len << ',';
    if (!row.excluded) {
      std::ostringstream wer;
      wer.precision(6);
      wer << row.wer;
      out << wer.str();
    }
    out << ',' << (row.excluded ? "true" : "false") << '\n';
  }
}

}  // namespace asrfix
