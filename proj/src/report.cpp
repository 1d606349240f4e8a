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

#include "asrfix/report.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "asrfix/util.hpp"

namespace asrfix {

namespace {

constexpr const char* kMissingCell = "\xe2\x80\x94";  // em dash

std::string speaker_cell(const EvalSummary& summary, Speaker speaker,
                         bool pooled) {
  auto it = summary.per_speaker.find(speaker);
  if (it == summary.per_speaker.end() || it->second.count == 0) {
    return kMissingCell;
  }
  return format_wer_percent(pooled ? it->second.pooled : it->second.macro);
}

}  // namespace

std::string format_wer_percent(double wer) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", wer * 100.0);
  return buffer;
}

std::string render_comparison_markdown(std::span<const EvalSummary> summaries) {
  if (summaries.empty()) throw ValidationError("no summaries to render");
  std::ostringstream out;
  out << "| Condition | Utts | Overall (macro) | Overall (pooled) | "
         "Child (macro) | Child (pooled) | Adult (macro) | Adult (pooled) | "
         "Excluded |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : summaries) {
    out << "| " << s.condition << " | " << s.included << " | "
        << format_wer_percent(s.macro_wer) << " | "
        << format_wer_percent(s.pooled_wer) << " | "
        << speaker_cell(s, Speaker::kChild, false) << " | "
        << speaker_cell(s, Speaker::kChild, true) << " | "
        << speaker_cell(s, Speaker::kAdult, false) << " | "
        << speaker_cell(s, Speaker::kAdult, true) << " | " << s.excluded_count
        << " |\n";
  }
  return out.str();
}

std::string render_comparison_csv(std::span<const EvalSummary> summaries) {
  if (summaries.empty()) throw ValidationError("no summaries to render");
  std::ostringstream out;
  out << "condition,utts,overall_macro,overall_pooled,child_macro,"
         "child_pooled,adult_macro,adult_pooled,excluded\n";
  for (const auto& s : summaries) {
    out << s.condition << ',' << s.included << ','
        << format_wer_percent(s.macro_wer) << ','
        << format_wer_percent(s.pooled_wer) << ','
        << speaker_cell(s, Speaker::kChild, false) << ','
        << speaker_cell(s, Speaker::kChild, true) << ','
        << speaker_cell(s, Speaker::kAdult, false) << ','
        << speaker_cell(s, Speaker::kAdult, true) << ',' << s.excluded_count
        << '\n';
  }
  return out.str();
}

std::string render_bucket_csv(std::span<const EvalSummary> summaries) {
  std::ostringstream out;
  out << "bucket,condition,macro_wer,count\n";
  for (const auto& s : summaries) {
    for (const auto& bucket : s.buckets) {
      out << bucket.label << ',' << s.condition << ','
          << (bucket.count > 0 ? format_wer_percent(bucket.macro_wer) : kMissingCell)
          << ',' << bucket.count << '\n';
    }
  }
  return out.str();
}

std::vector<EvalRow> score_baseline(const Corpus& corpus,
                                    const NBestIndex& nbests,
                                    const NormalizerConfig& cfg,
                                    const std::string& condition) {
  std::vector<EvalRow> rows;
  rows.reserve(corpus.utterances.size());
  for (const auto& utt : corpus.utterances) {
    const NBestList& nbest = nbests.at(utt.utt_id);
    rows.push_back(wer_utterance(utt.utt_id, utt.speaker, utt.text,
                                 nbest.best(), cfg, condition));
  }
  return rows;
}

std::vector<EvalRow> score_corrections(
    const Corpus& corpus, std::span<const CorrectionResult> corrections,
    const NormalizerConfig& cfg, const std::string& condition) {
  std::map<std::string_view, const CorrectionResult*> by_id;
  for (const auto& c : corrections) by_id[c.utt_id] = &c;
  std::vector<EvalRow> rows;
  rows.reserve(corpus.utterances.size());
  for (const auto& utt : corpus.utterances) {
    auto it = by_id.find(utt.utt_id);
    if (it == by_id.end()) {
      throw ValidationError("no correction for utt_id \"" + utt.utt_id + "\"");
    }
    rows.push_back(wer_utterance(utt.utt_id, utt.speaker, utt.text,
                                 it->second->corrected, cfg, condition));
  }
  return rows;
}

}  // namespace asrfix
