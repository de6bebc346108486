// Copyright 2026 The Detox Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "detox/select.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "detox/error.h"
#include "detox/metrics.h"

namespace detox {

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to normalize");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNotANumber, "non-finite value in normalization");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, max = *hi;
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(max == min ? 0.5 : (v - min) / (max - min));
  return out;
}

void normalize_scores(std::span<ScoredCandidate> candidates) {
  std::vector<double> content, fluency;
  for (const auto& c : candidates) {
    content.push_back(c.content_raw);
    fluency.push_back(c.fluency_raw);
  }
  const auto cn = minmax_normalize(content);
  const auto fn = minmax_normalize(fluency);
  for (size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].content_norm = cn[i];
    candidates[i].fluency_norm = 1.0 - fn[i];
    candidates[i].total = candidates[i].content_norm + candidates[i].fluency_norm;
  }
}

std::vector<ScoredCandidate> score_candidates(std::span<const std::string> source,
                                              std::span<const Tokens> candidates,
                                              const Scorer& scorer, const RestrictedVocab& vocab) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "no candidates to score");
  std::vector<ScoredCandidate> out;
  for (const auto& c : candidates) {
    if (c.empty() || contains_restricted(vocab, c)) continue;
    ScoredCandidate s;
    s.tokens = c;
    s.content_raw = sentence_bleu(c, source);
    s.fluency_raw = perplexity(scorer, c);
    out.push_back(std::move(s));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyAfterFilter,
                "all " + std::to_string(candidates.size()) + " candidates were filtered out");
  }
  normalize_scores(out);
  return out;
}

size_t select_best_index(std::span<const ScoredCandidate> scored) {
  if (scored.empty()) throw Error(ErrorCode::kInvalidArgument, "no scored candidates");
  size_t best = 0;
  for (size_t i = 1; i < scored.size(); ++i) {
    const auto& a = scored[i];
    const auto& b = scored[best];
    if (a.total > b.total + kTotalTieEpsilon) {
      best = i;
    } else if (std::abs(a.total - b.total) <= kTotalTieEpsilon) {
      if (a.fluency_raw < b.fluency_raw ||
          (a.fluency_raw == b.fluency_raw && a.tokens < b.tokens)) {
        best = i;
      }
    }
  }
  return best;
}

const ScoredCandidate& select_best(std::span<const ScoredCandidate> scored) {
  return scored[select_best_index(scored)];
}

namespace {

nlohmann::ordered_json candidate_json(const ScoredCandidate& c) {
  nlohmann::ordered_json j;
  j["tokens"] = c.tokens;
  j["content_raw"] = c.content_raw;
  j["fluency_raw"] = c.fluency_raw;
  j["content_norm"] = c.content_norm;
  j["fluency_norm"] = c.fluency_norm;
  j["total"] = c.total;
  return j;
}

ScoredCandidate candidate_from(const nlohmann::json& j) {
  ScoredCandidate c;
  c.tokens = j.at("tokens").get<Tokens>();
  c.content_raw = j.at("content_raw").get<double>();
  c.fluency_raw = j.at("fluency_raw").get<double>();
  c.content_norm = j.at("content_norm").get<double>();
  c.fluency_norm = j.at("fluency_norm").get<double>();
  c.total = j.at("total").get<double>();
  return c;
}

}  // namespace

std::string transfer_result_line(const TransferResult& r) {
  nlohmann::ordered_json j;
  j["id"] = r.source.id;
  j["source"] = r.source.tokens;
  j["label"] = label_name(r.source.label);
  j["output"] = r.output;
  j["selected"] = r.selected ? candidate_json(*r.selected) : nlohmann::ordered_json(nullptr);
  j["candidate_count"] = r.candidate_count;
  j["fallback_used"] = r.fallback_used;
  if (!r.fallback_reason.empty()) j["fallback_reason"] = r.fallback_reason;
  j["passthrough"] = r.passthrough;
  return j.dump();
}

TransferResult parse_transfer_result(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParse, "result line is not a JSON object");
  }
  try {
    TransferResult r;
    r.source.id = j.at("id").get<std::string>();
    r.source.tokens = j.at("source").get<Tokens>();
    r.source.label = parse_label(j.at("label").get<std::string>());
    r.output = j.at("output").get<Tokens>();
    if (!j.at("selected").is_null()) r.selected = candidate_from(j.at("selected"));
    r.candidate_count = j.at("candidate_count").get<size_t>();
    r.fallback_used = j.at("fallback_used").get<bool>();
    r.fallback_reason = j.value("fallback_reason", "");
    r.passthrough = j.at("passthrough").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad result line: ") + e.what());
  }
}

}  // namespace detox
