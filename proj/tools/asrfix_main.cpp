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

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asrfix/backend.hpp"
#include "asrfix/corpus.hpp"
#include "asrfix/corrector.hpp"
#include "asrfix/metrics.hpp"
#include "asrfix/nbest.hpp"
#include "asrfix/prompt.hpp"
#include "asrfix/report.hpp"
#include "asrfix/synth.hpp"
#include "asrfix/textnorm.hpp"
#include "asrfix/util.hpp"

namespace {

using namespace asrfix;

constexpr const char* kVersionText =
    "asrfix 0.1.0\n"
    "file format schema versions:\n"
    "  utterances.jsonl   v1\n"
    "  nbest.jsonl        v1\n"
    "  corrections.jsonl  v1\n"
    "  prompts.jsonl      v1\n"
    "  sft.jsonl          v1\n"
    "  normalizer config  v1\n"
    "  prompt template    v1\n";

std::string timestamp_header() {
  std::time_t now = std::time(nullptr);
  char buffer[64];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("# generated ") + buffer + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

struct ShapedOutput {
  bool no_timestamp = false;
  std::string shape(const std::string& body) const {
    return no_timestamp ? body : timestamp_header() + body;
  }
};

NormalizerConfig load_norm_config_or_default(const std::string& path) {
  return path.empty() ? NormalizerConfig::defaults()
                      : load_normalizer_config(path);
}

struct TemplateFlags {
  std::string template_path;
  std::string system_preset;  // conversation | tutoring
};

PromptTemplate resolve_template(const TemplateFlags& flags, int context_k) {
  PromptTemplate tpl;
  if (!flags.template_path.empty()) {
    tpl = PromptTemplate::load(flags.template_path);
    TemplateKind want =
        context_k == 0 ? TemplateKind::kNoContext : TemplateKind::kContext;
    if (tpl.kind != want) {
      throw ValidationError("template kind does not match --context " +
                            std::to_string(context_k));
    }
  } else {
    tpl = context_k == 0 ? PromptTemplate::default_no_context()
                         : PromptTemplate::default_context();
  }
  if (flags.system_preset == "tutoring") {
    tpl.system_text = kTutoringSystemPrompt;
  } else if (!flags.system_preset.empty() &&
             flags.system_preset != "conversation") {
    throw ValidationError("unknown --system-preset \"" + flags.system_preset +
                          "\" (expected conversation or tutoring)");
  }
  return tpl;
}

void check_context_k(int k, bool allow_any_k) {
  if (!allow_any_k && k != 0 && k != 1 && k != 3) {
    throw ValidationError("--context must be 0, 1 or 3 (or pass --allow-any-k)");
  }
}

int cmd_ingest(const std::string& in_path, const std::string& out_path,
               double max_duration, bool no_filter) {
  Corpus corpus = load_manifest(in_path, IndexPolicy::kStrict);
  FilterReport report;
  report.kept = static_cast<int>(corpus.utterances.size());
  if (!no_filter) {
    corpus = filter_max_duration(corpus, max_duration, &report);
  }
  write_manifest(corpus, out_path);
  nlohmann::ordered_json summary;
  summary["loaded"] = report.kept + report.removed;
  summary["kept"] = report.kept;
  summary["removed"] = report.removed;
  summary["no_duration"] = report.no_duration;
  summary["sessions"] = corpus.session_ids().size();
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_split(const std::string& corpus_path, std::uint64_t seed,
              const std::string& out_dir) {
  Corpus corpus = load_manifest(corpus_path, IndexPolicy::kAllowGaps);
  FoldAssignment folds = split_two_fold(corpus, seed);
  auto write_fold = [&](const std::string& name,
                        const std::set<std::string>& sessions) {
    std::ofstream out(out_dir + "/" + name);
    if (!out) throw Error("cannot write " + out_dir + "/" + name);
    for (const auto& id : sessions) out << id << '\n';
  };
  write_fold("fold_a.txt", folds.fold_a);
  write_fold("fold_b.txt", folds.fold_b);
  nlohmann::ordered_json summary;
  summary["seed"] = folds.seed;
  summary["fold_a"] = folds.fold_a.size();
  summary["fold_b"] = folds.fold_b.size();
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_synth(const std::string& corpus_path, const std::string& out_path,
              const std::string& model, double base_rate, double rank_step,
              int n, std::uint64_t seed, const std::string& lexicon_path,
              const std::string& source_tag) {
  Corpus corpus = load_manifest(corpus_path, IndexPolicy::kAllowGaps);
  CorruptionConfig cfg;
  if (model == "ctc_spelling") {
    cfg.model = CorruptionModel::kCtcSpelling;
  } else if (model == "lexical_substitution") {
    cfg.model = CorruptionModel::kLexicalSubstitution;
  } else {
    throw ValidationError("unknown --model \"" + model +
                          "\" (expected ctc_spelling or lexical_substitution)");
  }
  cfg.base_rate = base_rate;
  cfg.rank_rate_step = rank_step;
  cfg.n = n;
  cfg.seed = seed;
  cfg.source_tag = source_tag;
  if (!lexicon_path.empty()) {
    cfg.confusion_lexicon = load_confusion_lexicon(lexicon_path);
  }
  std::vector<NBestList> lists = make_nbest_corpus(corpus, cfg);
  write_nbest(lists, out_path);
  nlohmann::ordered_json summary;
  summary["utterances"] = lists.size();
  summary["n"] = cfg.n;
  summary["seed"] = cfg.seed;
  std::cout << summary.dump() << '\n';
  return 0;
}

// Training-style prompt rendering: context comes from ground-truth
// previous utterances, exactly as the SFT emitter builds it.
int cmd_prompts(const std::string& corpus_path, const std::string& nbest_path,
                const std::string& out_path, int context_k,
                const TemplateFlags& tpl_flags, bool allow_any_k) {
  check_context_k(context_k, allow_any_k);
  Corpus corpus = load_manifest(corpus_path, IndexPolicy::kAllowGaps);
  NBestIndex nbests = load_nbest(nbest_path);
  PromptTemplate tpl = resolve_template(tpl_flags, context_k);
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path);
  std::size_t count = 0;
  for (const std::string& session_id : corpus.session_ids()) {
    std::span<const Utterance> session = corpus.session(session_id);
    for (std::size_t i = 0; i < session.size(); ++i) {
      const Utterance& utt = session[i];
      PromptInstance instance;
      if (context_k == 0) {
        instance = build_no_context(utt, nbests.at(utt.utt_id), tpl);
      } else {
        std::vector<HistoryEntry> history;
        std::size_t take =
            std::min<std::size_t>(i, static_cast<std::size_t>(context_k));
        for (std::size_t h = i - take; h < i; ++h) {
          history.push_back(HistoryEntry{session[h].speaker, session[h].text});
        }
        instance = build_with_context(utt, nbests.at(utt.utt_id), history,
                                      context_k, tpl, allow_any_k);
      }
      nlohmann::ordered_json obj;
      obj["utt_id"] = instance.utt_id;
      obj["context_k"] = instance.context_k;
      obj["system"] = instance.system;
      obj["user"] = instance.user;
      obj["best"] = instance.best_hypothesis;
      out << obj.dump() << '\n';
      ++count;
    }
  }
  std::cout << nlohmann::ordered_json{{"prompts", count}}.dump() << '\n';
  return 0;
}

int cmd_sft(const std::string& corpus_path, const std::string& nbest_path,
            const std::string& out_path, int context_k,
            const TemplateFlags& tpl_flags, bool allow_any_k) {
  check_context_k(context_k, allow_any_k);
  Corpus corpus = load_manifest(corpus_path, IndexPolicy::kAllowGaps);
  NBestIndex nbests = load_nbest(nbest_path);
  PromptTemplate tpl = resolve_template(tpl_flags, context_k);
  std::vector<SftRecord> records =
      emit_sft_dataset(corpus, nbests, context_k, tpl, allow_any_k);
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path);
  write_sft_jsonl(out, records);
  std::cout << nlohmann::ordered_json{{"records", records.size()}}.dump()
            << '\n';
  return 0;
}

int cmd_correct(const std::string& corpus_path, const std::string& nbest_path,
                const std::string& out_path, int context_k,
                const TemplateFlags& tpl_flags, bool allow_any_k,
                bool no_fallback, const BackendKind& backend_kind,
                const GenerationParams& params, int concurrency) {
  check_context_k(context_k, allow_any_k);
  Corpus corpus = load_manifest(corpus_path, IndexPolicy::kAllowGaps);
  NBestIndex nbests = load_nbest(nbest_path);
  PromptTemplate tpl = resolve_template(tpl_flags, context_k);
  std::unique_ptr<Backend> backend = make_backend(backend_kind, &corpus);
  CorrectorOptions options;
  options.context_k = context_k;
  options.fallback_enabled = !no_fallback;
  options.concurrency = concurrency;
  options.allow_any_k = allow_any_k;
  std::vector<CorrectionResult> results =
      correct_corpus(corpus, nbests, tpl, params, *backend, options);
  write_corrections(results, out_path);
  std::size_t fallbacks = 0, errors = 0;
  for (const auto& r : results) {
    fallbacks += r.fallback_applied ? 1 : 0;
    errors += r.error.empty() ? 0 : 1;
  }
  nlohmann::ordered_json summary;
  summary["corrected"] = results.size();
  summary["fallbacks"] = fallbacks;
  summary["backend_errors"] = errors;
  std::cout << summary.dump() << '\n';
  return 0;
}

struct ScoreArgs {
  std::string corpus_path;
  std::string before_path;
  std::string after_path;
  std::string norm_config;
  std::string before_tag = "baseline";
  std::string after_tag = "corrected";
  std::string buckets = "default";
};

std::vector<EvalSummary> score_conditions(const ScoreArgs& args,
                                          std::vector<EvalRow>* all_rows) {
  Corpus corpus = load_manifest(args.corpus_path, IndexPolicy::kAllowGaps);
  NormalizerConfig cfg = load_norm_config_or_default(args.norm_config);
  BucketScheme scheme = BucketScheme::parse(args.buckets);
  std::vector<EvalSummary> summaries;
  NBestIndex nbests = load_nbest(args.before_path);
  std::vector<EvalRow> before =
      score_baseline(corpus, nbests, cfg, args.before_tag);
  summaries.push_back(aggregate(before, scheme));
  if (all_rows) all_rows->insert(all_rows->end(), before.begin(), before.end());
  if (!args.after_path.empty()) {
    std::vector<CorrectionResult> corrections =
        load_corrections(args.after_path);
    std::vector<EvalRow> after =
        score_corrections(corpus, corrections, cfg, args.after_tag);
    summaries.push_back(aggregate(after, scheme));
    if (all_rows) all_rows->insert(all_rows->end(), after.begin(), after.end());
  }
  return summaries;
}

int cmd_score(const ScoreArgs& args, const std::string& csv_out,
              const std::string& md_out, const std::string& rows_out,
              const ShapedOutput& shaped) {
  std::vector<EvalRow> rows;
  std::vector<EvalSummary> summaries = score_conditions(args, &rows);
  std::string markdown = render_comparison_markdown(summaries);
  std::cout << shaped.shape(markdown);
  if (!md_out.empty()) write_text(md_out, shaped.shape(markdown));
  if (!csv_out.empty()) {
    write_text(csv_out, shaped.shape(render_comparison_csv(summaries)));
  }
  if (!rows_out.empty()) {
    std::ofstream out(rows_out);
    if (!out) throw Error("cannot write " + rows_out);
    write_eval_rows_csv(out, rows);
  }
  return 0;
}

int cmd_report(const ScoreArgs& args, const std::string& out_path,
               const ShapedOutput& shaped) {
  std::vector<EvalSummary> summaries = score_conditions(args, nullptr);
  std::string csv = shaped.shape(render_bucket_csv(summaries));
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
    std::cout << nlohmann::ordered_json{{"written", out_path}}.dump() << '\n';
  }
  return 0;
}

int cmd_norm(bool dump_config, const std::string& config_path,
             const std::string& text, const std::string& in_path,
             const std::string& out_path) {
  NormalizerConfig cfg = load_norm_config_or_default(config_path);
  if (dump_config) {
    std::cout << normalizer_config_to_json(cfg);
    return 0;
  }
  if (!text.empty() || in_path.empty()) {
    std::cout << normalize(text, cfg) << '\n';
    return 0;
  }
  std::ifstream in(in_path);
  if (!in) throw Error("cannot open " + in_path);
  std::ostream* out = &std::cout;
  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path);
    if (!file_out) throw Error("cannot write " + out_path);
    out = &file_out;
  }
  std::string line;
  while (std::getline(in, line)) *out << normalize(line, cfg) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LLM-based error correction toolkit for conversational ASR"};
  app.set_version_flag("--version", kVersionText);
  app.require_subcommand(1);

  // ingest
  std::string in_path, out_path, corpus_path, nbest_path;
  double max_duration = 30.0;
  bool no_filter = false;
  auto* ingest = app.add_subcommand("ingest", "Validate and filter a corpus manifest");
  ingest->add_option("--in", in_path, "input utterances.jsonl")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--out", out_path, "validated output manifest")->required();
  ingest->add_option("--max-duration", max_duration,
                     "drop utterances longer than this many seconds");
  ingest->add_flag("--no-filter", no_filter, "skip the duration filter");

  // split
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  auto* split = app.add_subcommand("split", "Session-level 2-fold split");
  split->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
  split->add_option("--seed", seed)->required();
  split->add_option("--out-dir", out_dir, "directory for fold_a.txt/fold_b.txt");

  // synth
  std::string model = "ctc_spelling", lexicon_path, source_tag;
  double base_rate = 0.1, rank_step = 0.05;
  int nbest_n = 5;
  auto* synth = app.add_subcommand("synth", "Generate synthetic N-best lists");
  synth->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
  synth->add_option("--out", out_path, "output nbest.jsonl")->required();
  synth->add_option("--model", model, "ctc_spelling | lexical_substitution");
  synth->add_option("--base-rate", base_rate, "rank-1 corruption rate");
  synth->add_option("--rank-step", rank_step, "additive rate per rank");
  synth->add_option("--n", nbest_n, "hypotheses per utterance");
  synth->add_option("--seed", seed)->required();
  synth->add_option("--lexicon", lexicon_path, "confusion lexicon JSON")
      ->check(CLI::ExistingFile);
  synth->add_option("--source", source_tag, "source tag for the manifest");

  // shared prompt/correct flags
  int context_k = 0;
  bool allow_any_k = false, no_fallback = false;
  TemplateFlags tpl_flags;
  auto add_prompt_flags = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--nbest", nbest_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path)->required();
    cmd->add_option("--context", context_k, "previous utterances: 0, 1 or 3");
    cmd->add_option("--template", tpl_flags.template_path, "template file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--system-preset", tpl_flags.system_preset,
                    "conversation | tutoring");
    cmd->add_flag("--allow-any-k", allow_any_k, "permit context sizes beyond 1/3");
  };

  auto* prompts = app.add_subcommand("prompts", "Render prompts (ground-truth context)");
  add_prompt_flags(prompts);
  auto* sft = app.add_subcommand("sft", "Emit an instruction-tuning dataset");
  add_prompt_flags(sft);

  // correct
  auto* correct = app.add_subcommand("correct", "Run the correction pipeline");
  add_prompt_flags(correct);
  BackendKind backend_kind;
  backend_kind.kind = "identity";
  GenerationParams params;
  int concurrency = 4;
  correct->add_option("--backend", backend_kind.kind,
                      "identity | oracle | scripted | http");
  correct->add_option("--script", backend_kind.script_path,
                      "scripted backend response table (jsonl)");
  correct->add_option("--endpoint", backend_kind.http.endpoint,
                      "chat-completions URL for the http backend");
  correct->add_option("--model", params.model_name, "model name sent on the wire");
  correct->add_option("--temperature", params.temperature);
  correct->add_option("--timeout", params.request_timeout_s, "per-request seconds");
  correct->add_option("--retries", params.max_retries);
  correct->add_option("--max-output-words", params.max_output_words,
                      "approximate output budget; 0 = server default");
  correct->add_option("--concurrency", concurrency, "max in-flight requests");
  correct->add_flag("--no-fallback", no_fallback,
                    "disable the best-hypothesis length fallback");

  // score
  ScoreArgs score_args;
  std::string csv_out, md_out, rows_out;
  ShapedOutput shaped;
  auto add_score_flags = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", score_args.corpus_path)
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--before", score_args.before_path, "baseline nbest.jsonl")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--after", score_args.after_path, "corrections.jsonl")
        ->check(CLI::ExistingFile);
    cmd->add_option("--norm-config", score_args.norm_config)
        ->check(CLI::ExistingFile);
    cmd->add_option("--before-tag", score_args.before_tag);
    cmd->add_option("--after-tag", score_args.after_tag);
    cmd->add_option("--buckets", score_args.buckets,
                    "\"default\" or e.g. \"1,2-3,4+\"");
    cmd->add_flag("--no-timestamp", shaped.no_timestamp,
                  "omit the generated-at header line");
  };
  auto* score = app.add_subcommand("score", "WER before/after comparison table");
  add_score_flags(score);
  score->add_option("--csv-out", csv_out);
  score->add_option("--md-out", md_out);
  score->add_option("--rows-out", rows_out, "per-utterance EvalRow CSV");

  auto* report = app.add_subcommand("report", "WER by utterance-length bucket");
  add_score_flags(report);
  report->add_option("--out", out_path, "bucket CSV path (stdout if omitted)");

  // norm
  bool dump_config = false;
  std::string norm_text, norm_config;
  auto* norm = app.add_subcommand("norm", "Text normalizer utilities");
  norm->add_flag("--dump-config", dump_config, "print the active config JSON");
  norm->add_option("--config", norm_config)->check(CLI::ExistingFile);
  norm->add_option("--text", norm_text, "normalize one string");
  norm->add_option("--in", in_path, "normalize a file line by line")
      ->check(CLI::ExistingFile);
  norm->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(in_path, out_path, max_duration, no_filter);
    if (split->parsed()) return cmd_split(corpus_path, seed, out_dir);
    if (synth->parsed()) {
      return cmd_synth(corpus_path, out_path, model, base_rate, rank_step,
                       nbest_n, seed, lexicon_path, source_tag);
    }
    if (prompts->parsed()) {
      return cmd_prompts(corpus_path, nbest_path, out_path, context_k,
                         tpl_flags, allow_any_k);
    }
    if (sft->parsed()) {
      return cmd_sft(corpus_path, nbest_path, out_path, context_k, tpl_flags,
                     allow_any_k);
    }
    if (correct->parsed()) {
      return cmd_correct(corpus_path, nbest_path, out_path, context_k,
                         tpl_flags, allow_any_k, no_fallback, backend_kind,
                         params, concurrency);
    }
    if (score->parsed()) return cmd_score(score_args, csv_out, md_out, rows_out, shaped);
    if (report->parsed()) return cmd_report(score_args, out_path, shaped);
    if (norm->parsed()) {
      return cmd_norm(dump_config, norm_config, norm_text, in_path, out_path);
    }
  } catch (const std::exception& e) {
    nlohmann::ordered_json error;
    error["error"]["type"] = "runtime";
    error["error"]["message"] = e.what();
    std::cerr << error.dump() << std::endl;
    return 1;
  }
  return 0;
}
