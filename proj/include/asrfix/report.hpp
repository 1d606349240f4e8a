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

#ifndef ASRFIX_REPORT_HPP_
#define ASRFIX_REPORT_HPP_

#include <span>
#include <string>
#include <vector>

#include "asrfix/corpus.hpp"
#include "asrfix/corrector.hpp"
#include "asrfix/metrics.hpp"
#include "asrfix/nbest.hpp"

namespace asrfix {

// WER ratio -> percentage with two decimals: 0.4667 -> "46.67".
std::string format_wer_percent(double wer);

// One row per condition; Overall/Child/Adult columns, macro and pooled
// each, explicitly labeled. Speaker cells with no utterances render "—".
std::string render_comparison_markdown(std::span<const EvalSummary> summaries);
std::string render_comparison_csv(std::span<const EvalSummary> summaries);

// bucket,condition,macro_wer,count — one line per (condition, bucket).
std::string render_bucket_csv(std::span<const EvalSummary> summaries);

// Scores every corpus utterance against its rank-1 hypothesis.
std::vector<EvalRow> score_baseline(const Corpus& corpus,
                                    const NBestIndex& nbests,
                                    const NormalizerConfig& cfg,
                                    const std::string& condition);

// Scores corrected transcripts; every utterance needs a correction.
std::vector<EvalRow> score_corrections(
    const Corpus& corpus, std::span<const CorrectionResult> corrections,
    const NormalizerConfig& cfg, const std::string& condition);

}  // namespace asrfix

#endif  // ASRFIX_REPORT_HPP_
