// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "editjudge/errors.hpp"
#include "editjudge/judge.hpp"

namespace editjudge {
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// End (exclusive) of the balanced {...} starting at `open`, or npos.
std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

// Every top-level JSON object embedded in free text.
std::vector<json> json_blocks(std::string_view raw) {
  std::vector<json> blocks;
  std::size_t i = 0;
  while ((i = raw.find('{', i)) != std::string_view::npos) {
    const auto end = match_brace(raw, i);
    if (end == std::string_view::npos) break;
    try {
      auto j = json::parse(raw.substr(i, end - i));
      if (j.is_object()) {
        blocks.push_back(std::move(j));
        i = end;
        continue;
      }
    } catch (const json::parse_error&) {
    }
    ++i;
  }
  return blocks;
}

int count_words(std::string_view s) {
  int n = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

}  // namespace

PartialVerdict parse_partial_verdict(std::string_view raw, std::span<const FactorId> expected,
                                     std::optional<WordBounds> bounds) {
  const std::string raw_text(raw);
  const auto blocks = json_blocks(raw);
  if (blocks.empty()) throw VerdictParseError("response contains no JSON block", raw_text);
  if (blocks.size() > 1) {
    throw VerdictParseError(
        fmt::format("response contains {} JSON blocks; exactly one is required", blocks.size()),
        raw_text);
  }
  const auto& block = blocks.front();

  PartialVerdict out;
  if (auto it = block.find("image_id"); it != block.end() && it->is_string()) {
    out.image_id = it->get<std::string>();
  }

  const json* results = nullptr;
  for (const auto& [key, value] : block.items()) {
    if (key.size() >= 14 && key.compare(key.size() - 14, 14, "factor_results") == 0) {
      if (results) {
        throw VerdictParseError("response has more than one factor results object", raw_text);
      }
      results = &value;
    }
  }
  if (!results || !results->is_object()) {
    throw VerdictParseError("response lacks a factor results object", raw_text);
  }

  std::vector<std::string> unexpected;
  for (const auto& [key, _] : results->items()) {
    const auto id = factor_from_key(key);
    if (!id || std::find(expected.begin(), expected.end(), *id) == expected.end()) {
      unexpected.push_back(key);
    }
  }
  if (!unexpected.empty()) {
    throw VerdictParseError(fmt::format("unexpected factor(s): {}", join(unexpected)), raw_text,
                            unexpected);
  }

  std::vector<std::string> missing;
  for (auto id : expected) {
    if (!results->contains(std::string(factor(id).key))) {
      missing.emplace_back(factor(id).key);
    }
  }
  if (!missing.empty()) {
    throw VerdictParseError(fmt::format("missing factor(s): {}", join(missing)), raw_text,
                            missing);
  }

  for (auto id : expected) {
    const std::string key(factor(id).key);
    const auto& entry = (*results)[key];
    if (!entry.is_object() || !entry.contains("score")) {
      throw VerdictParseError(fmt::format("factor {} has no score", key), raw_text, {key});
    }
    const auto& score = entry["score"];
    if (!score.is_number_integer()) {
      throw VerdictParseError(
          fmt::format("score for {} must be an integer between 1 and 7, got {}", key,
                      score.dump()),
          raw_text, {key});
    }
    const auto v = score.get<long long>();
    if (v < 1 || v > 7) {
      throw VerdictParseError(
          fmt::format("score for {} is {}, outside 1..7", key, v), raw_text, {key});
    }
    FactorVerdict fv{static_cast<int>(v), {}};
    if (auto j = entry.find("justification"); j != entry.end()) {
      if (!j->is_string()) {
        throw VerdictParseError(fmt::format("justification for {} is not a string", key),
                                raw_text, {key});
      }
      fv.justification = j->get<std::string>();
    }
    if (bounds) {
      const int words = count_words(fv.justification);
      if (words < bounds->min_words || words > bounds->max_words) {
        out.warnings.push_back(fmt::format("justification for {} has {} words (expected {}-{})",
                                           key, words, bounds->min_words, bounds->max_words));
      }
    }
    out.factors.emplace(id, std::move(fv));
  }
  return out;
}

FactorScores JudgeVerdict::scores() const {
  FactorScores s;
  for (const auto& f : all_factors()) {
    s.set(f.id, LikertScore::from_int(factors[static_cast<std::size_t>(f.id)].score, f.key));
  }
  return s;
}

namespace {

JudgeVerdict complete_verdict(const PartialVerdict& partial) {
  JudgeVerdict v;
  for (const auto& [id, fv] : partial.factors) v.factors[static_cast<std::size_t>(id)] = fv;
  v.overall = overall_from_factors(v.scores());
  v.warnings = partial.warnings;
  if (partial.image_id) v.image_id = *partial.image_id;
  return v;
}

std::vector<FactorId> every_factor() {
  std::vector<FactorId> ids;
  for (const auto& f : all_factors()) ids.push_back(f.id);
  return ids;
}

}  // namespace

JudgeVerdict parse_verdict(std::string_view raw, std::optional<WordBounds> bounds) {
  const auto ids = every_factor();
  auto v = complete_verdict(parse_partial_verdict(raw, ids, bounds));
  v.raw_responses.emplace_back(raw);
  return v;
}

// ---------------------------------------------------------------------------
// Archive format

ordered_json verdict_to_json(const JudgeVerdict& v) {
  ordered_json factors = ordered_json::object();
  for (const auto& f : all_factors()) {
    const auto& fv = v.factors[static_cast<std::size_t>(f.id)];
    factors[std::string(f.key)] = {{"score", fv.score}, {"justification", fv.justification}};
  }
  ordered_json j;
  j["image_id"] = v.image_id;
  j["edit_type"] = edit_type_name(v.edit_type);
  j["model"] = v.model;
  j["prompt_variant"] = variant_key(v.variant);
  j["mode"] = mode_key(v.mode);
  j["factor_results"] = std::move(factors);
  j["overall"] = v.overall;
  j["attempts"] = v.attempts;
  j["warnings"] = v.warnings;
  j["raw_response"] = v.raw_responses;
  return j;
}

JudgeVerdict verdict_from_json(const json& j) {
  JudgeVerdict v;
  try {
    v.image_id = j.at("image_id").get<std::string>();
    v.edit_type = parse_edit_type(j.at("edit_type").get<std::string>());
    v.model = j.at("model").get<std::string>();
    v.variant = variant_from_key(j.at("prompt_variant").get<std::string>());
    v.mode = mode_from_key(j.at("mode").get<std::string>());
    const auto& factors = j.at("factor_results");
    for (const auto& f : all_factors()) {
      const auto& entry = factors.at(std::string(f.key));
      auto& fv = v.factors[static_cast<std::size_t>(f.id)];
      fv.score = LikertScore::from_json(entry.at("score"), f.key).value();
      fv.justification = entry.value("justification", "");
    }
    v.overall = overall_from_factors(v.scores());
    v.attempts = j.value("attempts", 1);
    v.warnings = j.value("warnings", std::vector<std::string>{});
    v.raw_responses = j.value("raw_response", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ValidationError("verdict", fmt::format("malformed verdict record: {}", e.what()));
  }
  return v;
}

std::vector<JudgeVerdict> parse_verdicts_jsonl(std::string_view text) {
  std::vector<JudgeVerdict> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(verdict_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("line {}: {}", line_no, e.what()), line_no);
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return parse_verdicts_jsonl(read_file(path));
}

// ---------------------------------------------------------------------------
// Orchestration

JudgeVerdict judge_task(const EditTask& task, JudgeClient& client, PromptVariant variant,
                        JudgeMode mode, int attempts) {
  if (attempts < 1) throw PreconditionError("attempts must be >= 1");
  const auto docs = render_prompt(variant, task, mode);
  const auto bounds = justification_bounds(variant);

  JudgeVerdict merged;
  merged.image_id = task.task_id;
  merged.edit_type = task.edit_type;
  merged.variant = variant;
  merged.mode = mode;
  merged.model = client.model_name();
  std::map<FactorId, FactorVerdict> all;

  for (const auto& doc : docs) {
    std::string last_raw;
    std::string last_error;
    std::vector<std::string> last_factors;
    bool ok = false;
    for (int attempt = 1; attempt <= attempts && !ok; ++attempt) {
      const auto response = client.complete(doc, task);
      last_raw = response.text;
      try {
        auto partial = parse_partial_verdict(response.text, doc.factors, bounds);
        if (partial.image_id && *partial.image_id != task.task_id) {
          partial.warnings.push_back(fmt::format("response image_id '{}' differs from task '{}'",
                                                 *partial.image_id, task.task_id));
        }
        for (auto& [id, fv] : partial.factors) all[id] = std::move(fv);
        for (auto& w : partial.warnings) merged.warnings.push_back(std::move(w));
        merged.raw_responses.push_back(response.text);
        merged.attempts = std::max(merged.attempts, attempt);
        ok = true;
      } catch (const VerdictParseError& e) {
        last_error = e.what();
        last_factors = e.factors();
      }
    }
    if (!ok) {
      std::string scope = doc.category ? fmt::format(" ({})", category_key(*doc.category)) : "";
      std::string named = last_factors.empty() ? "" : fmt::format(" [factors: {}]", join(last_factors));
      throw JudgingError(fmt::format("task '{}'{}: no valid verdict after {} attempts: {}{}",
                                     task.task_id, scope, attempts, last_error, named),
                         last_raw, attempts);
    }
  }

  for (const auto& [id, fv] : all) merged.factors[static_cast<std::size_t>(id)] = fv;
  merged.overall = overall_from_factors(merged.scores());
  return merged;
}

}  // namespace editjudge
