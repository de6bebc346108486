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

#ifndef DETOX_SELECT_H_
#define DETOX_SELECT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detox/corpus.h"
#include "detox/lm.h"

namespace detox {

// (v - min) / (max - min); every output is 0.5 when max == min. Throws
// kNotANumber on NaN or infinite input and kInvalidArgument on empty input.
std::vector<double> minmax_normalize(std::span<const double> values);

struct ScoredCandidate {
  Tokens tokens;
  double content_raw = 0.0;  // smoothed sentence BLEU against the source
  double fluency_raw = 0.0;  // perplexity
  double content_norm = 0.0;
  double fluency_norm = 0.0;  // 1 - minmax(PPL)
  double total = 0.0;
  bool operator==(const ScoredCandidate&) const = default;
};

// Fills the normalized fields from the raw ones, fitted over this set.
void normalize_scores(std::span<ScoredCandidate> candidates);

// Drops candidates holding a restricted word, scores the rest. Throws
// kEmptyAfterFilter when nothing survives.
std::vector<ScoredCandidate> score_candidates(std::span<const std::string> source,
                                              std::span<const Tokens> candidates,
                                              const Scorer& scorer, const RestrictedVocab& vocab);

inline constexpr double kTotalTieEpsilon = 1e-12;

// Highest total; totals within kTotalTieEpsilon tie and go to the lower
// perplexity, then to the lexicographically smaller token list.
size_t select_best_index(std::span<const ScoredCandidate> scored);
const ScoredCandidate& select_best(std::span<const ScoredCandidate> scored);

struct TransferResult {
  LabeledSentence source;
  Tokens output;
  std::optional<ScoredCandidate> selected;  // empty for pass-through and removal fallback
  size_t candidate_count = 0;
  bool fallback_used = false;
  std::string fallback_reason;
  bool passthrough = false;  // input was not offensive
  bool operator==(const TransferResult&) const = default;
};

std::string transfer_result_line(const TransferResult& result);
TransferResult parse_transfer_result(std::string_view line);

}  // namespace detox

#endif  // DETOX_SELECT_H_
