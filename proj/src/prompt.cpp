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

#include "asrfix/prompt.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "asrfix/util.hpp"

namespace asrfix {

const char kTutoringSystemPrompt[] =
    "You are a helpful assistant that helps to correct transcriptions from a "
    "child in a tutoring session.";

namespace {

constexpr std::string_view kNoneSentinel = "None";

constexpr std::array<std::string_view, 5> kKnownPlaceholders = {
    "speaker", "best", "others", "num_context", "prev_sentences"};

constexpr std::array<std::string_view, 2> kContextOnlyPlaceholders = {
    "num_context", "prev_sentences"};

// Placeholder-aware scan. Doubled braces escape literals; every bare
// {name} must be a known placeholder.
std::vector<std::string> placeholders_in(std::string_view text,
                                         const std::string& origin) {
  std::vector<std::string> found;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '}') {
      if (i + 1 < text.size() && text[i + 1] == '}') {
        i += 2;
        continue;
      }
      throw ValidationError(origin + ": stray \"}\" (escape literal braces as }})");
    }
    if (c != '{') {
      ++i;
      continue;
    }
    if (i + 1 < text.size() && text[i + 1] == '{') {
      i += 2;
      continue;
    }
    std::size_t close = text.find('}', i + 1);
    if (close == std::string_view::npos) {
      throw ValidationError(origin + ": unterminated placeholder");
    }
    std::string name(text.substr(i + 1, close - i - 1));
    if (std::find(kKnownPlaceholders.begin(), kKnownPlaceholders.end(), name) ==
        kKnownPlaceholders.end()) {
      throw ValidationError(origin + ": unknown placeholder {" + name + "}");
    }
    found.push_back(std::move(name));
    i = close + 1;
  }
  return found;
}

void validate_template(const PromptTemplate& tpl, const std::string& origin) {
  if (!placeholders_in(tpl.system_text, origin + " [system]").empty()) {
    throw ValidationError(origin + ": system text must not contain placeholders");
  }
  std::vector<std::string> names = placeholders_in(tpl.user_text, origin + " [user]");
  auto has = [&](std::string_view name) {
    return std::find(names.begin(), names.end(), name) != names.end();
  };
  for (std::string_view required : {"speaker", "best", "others"}) {
    if (!has(required)) {
      throw ValidationError(origin + ": user text must contain {" +
                            std::string(required) + "}");
    }
  }
  for (std::string_view ctx : kContextOnlyPlaceholders) {
    bool present = has(ctx);
    if (tpl.kind == TemplateKind::kContext && !present) {
      throw ValidationError(origin + ": context template must contain {" +
                            std::string(ctx) + "}");
    }
    if (tpl.kind == TemplateKind::kNoContext && present) {
      throw ValidationError(origin + ": no-context template must not contain {" +
                            std::string(ctx) + "}");
    }
  }
}

// Single pass so substituted values are never rescanned for placeholders.
std::string render(
    std::string_view text,
    const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      out += '{';
      i += 2;
      continue;
    }
    if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      out += '}';
      i += 2;
      continue;
    }
    if (c == '{') {
      std::size_t close = text.find('}', i + 1);
      auto it = values.find(text.substr(i + 1, close - i - 1));
      out += it->second;  // parse-time validation guarantees the key
      i = close + 1;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

std::string render_others(const NBestList& nbest) {
  if (nbest.hyps.size() <= 1) return std::string(kNoneSentinel);
  std::vector<std::string> rest(nbest.hyps.begin() + 1, nbest.hyps.end());
  return join(rest, "\n");
}

std::string render_history(std::span<const HistoryEntry> history) {
  if (history.empty()) return std::string(kNoneSentinel);
  std::vector<std::string> lines;
  lines.reserve(history.size());
  for (const auto& entry : history) {
    lines.push_back(std::string(speaker_display_name(entry.speaker)) + ": " +
                    entry.text);
  }
  return join(lines, "\n");
}

}  // namespace

PromptTemplate PromptTemplate::parse(std::string_view contents,
                                     const std::string& origin) {
  std::istringstream in{std::string(contents)};
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(origin + ": empty template file");
  }
  std::string_view header = trim(line);
  PromptTemplate tpl;
  if (header == "kind: no_context") {
    tpl.kind = TemplateKind::kNoContext;
  } else if (header == "kind: context") {
    tpl.kind = TemplateKind::kContext;
  } else {
    throw ValidationError(origin +
                          ": first line must be \"kind: no_context\" or \"kind: context\"");
  }
  enum class Section { kNone, kSystem, kUser } section = Section::kNone;
  std::string system_text, user_text;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t == "[system]") {
      section = Section::kSystem;
      continue;
    }
    if (t == "[user]") {
      section = Section::kUser;
      continue;
    }
    if (section == Section::kNone) {
      if (t.empty()) continue;
      throw ValidationError(origin + ": text before [system]/[user] section");
    }
    auto& target = section == Section::kSystem ? system_text : user_text;
    if (!target.empty()) target += '\n';
    target += line;
  }
  tpl.system_text = std::string(trim(system_text));
  tpl.user_text = std::string(trim(user_text));
  if (tpl.user_text.empty()) {
    throw ValidationError(origin + ": missing or empty [user] section");
  }
  validate_template(tpl, origin);
  return tpl;
}

PromptTemplate PromptTemplate::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

const PromptTemplate& PromptTemplate::default_no_context() {
  static const PromptTemplate tpl = parse(
      "kind: no_context\n"
      "[system]\n"
      "You are a helpful assistant that corrects speech recognition "
      "transcripts from a conversation between a child and an adult.\n"
      "[user]\n"
      "A speech recognizer transcribed an utterance spoken by the {speaker}.\n"
      "The best hypothesis is:\n"
      "{best}\n"
      "\n"
      "The other hypotheses, from more likely to less likely, are:\n"
      "{others}\n"
      "\n"
      "Reply with the corrected transcription of the utterance and nothing "
      "else.\n",
      "<built-in no-context template>");
  return tpl;
}

const PromptTemplate& PromptTemplate::default_context() {
  static const PromptTemplate tpl = parse(
      "kind: context\n"
      "[system]\n"
      "You are a helpful assistant that corrects speech recognition "
      "transcripts from a conversation between a child and an adult.\n"
      "[user]\n"
      "A speech recognizer transcribed an utterance spoken by the {speaker}.\n"
      "The best hypothesis is:\n"
      "{best}\n"
      "\n"
      "The other hypotheses, from more likely to less likely, are:\n"
      "{others}\n"
      "\n"
      "The previous {num_context} utterances in the conversation were:\n"
      "{prev_sentences}\n"
      "\n"
      "Reply with the corrected transcription of the utterance and nothing "
      "else.\n",
      "<built-in context template>");
  return tpl;
}

PromptInstance build_no_context(const Utterance& utt, const NBestList& nbest,
                                const PromptTemplate& tpl) {
  if (tpl.kind != TemplateKind::kNoContext) {
    throw ValidationError("build_no_context requires a no-context template");
  }
  if (nbest.hyps.empty()) {
    throw ValidationError("utt_id \"" + utt.utt_id + "\": empty N-best list");
  }
  std::map<std::string, std::string, std::less<>> values;
  values["speaker"] = std::string(speaker_display_name(utt.speaker));
  values["best"] = nbest.best();
  values["others"] = render_others(nbest);
  PromptInstance instance;
  instance.system = tpl.system_text;
  instance.user = render(tpl.user_text, values);
  instance.utt_id = utt.utt_id;
  instance.context_k = 0;
  instance.best_hypothesis = nbest.best();
  return instance;
}

PromptInstance build_with_context(const Utterance& utt, const NBestList& nbest,
                                  std::span<const HistoryEntry> history, int k,
                                  const PromptTemplate& tpl, bool allow_any_k) {
  if (tpl.kind != TemplateKind::kContext) {
    throw ValidationError("build_with_context requires a context template");
  }
  if (nbest.hyps.empty()) {
    throw ValidationError("utt_id \"" + utt.utt_id + "\": empty N-best list");
  }
  if (!allow_any_k && k != 1 && k != 3) {
    throw ValidationError("context size must be 1 or 3 (got " +
                          std::to_string(k) + "); use the any-k override to experiment");
  }
  if (k < 1) throw ValidationError("context size must be positive");
  if (history.size() > static_cast<std::size_t>(k)) {
    throw ValidationError("utt_id \"" + utt.utt_id + "\": history holds " +
                          std::to_string(history.size()) + " entries, limit is " +
                          std::to_string(k));
  }
  std::map<std::string, std::string, std::less<>> values;
  values["speaker"] = std::string(speaker_display_name(utt.speaker));
  values["best"] = nbest.best();
  values["others"] = render_others(nbest);
  values["num_context"] = std::to_string(k);
  values["prev_sentences"] = render_history(history);
  PromptInstance instance;
  instance.system = tpl.system_text;
  instance.user = render(tpl.user_text, values);
  instance.utt_id = utt.utt_id;
  instance.context_k = k;
  instance.best_hypothesis = nbest.best();
  return instance;
}

std::vector<SftRecord> emit_sft_dataset(const Corpus& corpus,
                                        const NBestIndex& nbests,
                                        int context_k,
                                        const PromptTemplate& tpl,
                                        bool allow_any_k) {
  std::vector<SftRecord> records;
  records.reserve(corpus.utterances.size());
  for (const std::string& session_id : corpus.session_ids()) {
    std::span<const Utterance> session = corpus.session(session_id);
    for (std::size_t i = 0; i < session.size(); ++i) {
      const Utterance& utt = session[i];
      const NBestList& nbest = nbests.at(utt.utt_id);
      PromptInstance instance;
      if (context_k == 0) {
        instance = build_no_context(utt, nbest, tpl);
      } else {
        // Training-side context: ground-truth reference texts of the
        // previous utterances, never hypotheses.
        std::vector<HistoryEntry> history;
        std::size_t take = std::min<std::size_t>(i, static_cast<std::size_t>(context_k));
        for (std::size_t h = i - take; h < i; ++h) {
          history.push_back(HistoryEntry{session[h].speaker, session[h].text});
        }
        instance = build_with_context(utt, nbest, history, context_k, tpl,
                                      allow_any_k);
      }
      SftRecord record;
      record.system = std::move(instance.system);
      record.user = std::move(instance.user);
      record.assistant = utt.text;  // verbatim, un-normalized
      records.push_back(std::move(record));
    }
  }
  return records;
}

void write_sft_jsonl(std::ostream& out, std::span<const SftRecord> records) {
  for (const auto& record : records) {
    nlohmann::ordered_json obj;
    obj["messages"] = nlohmann::ordered_json::array(
        {{{"role", "system"}, {"content", record.system}},
         {{"role", "user"}, {"content", record.user}},
         {{"role", "assistant"}, {"content", record.assistant}}});
    out << obj.dump() << '\n';
  }
}

}  // namespace asrfix
