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

#ifndef DETOX_GENERATE_H_
#define DETOX_GENERATE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "detox/lm.h"
#include "detox/postag.h"

namespace detox {

// Word occurrences of the source sentence and template positions that share
// one tag. Words are source token indices in sentence order; positions are
// template indices in ascending order.
struct TagMatch {
  PosTag tag;
  std::vector<size_t> words;
  std::vector<size_t> positions;
};

// Tags present in both the source and the template, ascending by tag. kBw is
// never shared, so restricted words never enter a TagMatch.
struct MatchPlan {
  std::vector<TagMatch> shared;
};

// Source word `source_index` goes to template slot `slot`.
struct Placement {
  size_t source_index;
  size_t slot;
  bool operator==(const Placement&) const = default;
};

// An injective word -> slot mapping for one tag, sorted by slot.
struct Assignment {
  std::vector<Placement> placements;
  bool operator==(const Assignment&) const = default;
};

struct CandidateSlots {
  std::vector<Slot> slots;
  size_t template_id = 0;
  std::vector<Placement> provenance;
};

// `source.tags` must already carry kBw for restricted words (tag_and_mark).
MatchPlan plan_match(const TaggedSentence& source, const PosSequence& templ);

// k-permutations P(n, k) = n! / (n - k)!, saturating at UINT64_MAX.
uint64_t permutations(uint64_t n, uint64_t k);

// All injective assignments covering min(|words|, |positions|) pairs, i.e.
// P(max(N, M), min(N, M)) of them, truncated to `cap`. Order:
//   N <= M: words in occurrence order each pick a distinct position; the
//           position tuple increases lexicographically.
//   N >  M: positions in ascending order each pick a distinct word; the word
//           tuple increases lexicographically.
std::vector<Assignment> enumerate_assignments(std::span<const size_t> words,
                                              std::span<const size_t> positions, size_t cap);

CandidateSlots empty_candidate(size_t length, size_t template_id);

// Pure: returns a new candidate with the assignment's words written in.
// Throws kLogic if a target slot is already filled or out of range.
CandidateSlots apply_assignment(const Assignment& assignment, const CandidateSlots& candidate,
                                std::span<const std::string> source_tokens);

struct GenerationCaps {
  size_t per_tag = 24;
  size_t per_template = 64;
  size_t per_sentence = 640;
};

struct TemplateStats {
  size_t template_id = 0;
  std::vector<size_t> assignments_per_tag;  // |A_k| after the per-tag cap
  uint64_t uncapped_candidates = 0;         // product of uncapped P(max, min)
  size_t matched_candidates = 0;            // after per-template and per-sentence caps
};

struct GenerationStats {
  std::vector<TemplateStats> templates;
  size_t matched_candidates = 0;
  size_t unique_outputs = 0;
  bool cap_hit = false;
};

struct Generation {
  std::vector<Tokens> candidates;
  GenerationStats stats;
};

// Cartesian product of per-tag assignments for one template, in canonical
// order (first shared tag most significant), truncated to `cap`.
std::vector<CandidateSlots> match_template(const TaggedSentence& source, const PosSequence& templ,
                                           size_t template_id, const GenerationCaps& caps,
                                           TemplateStats* stats);

// Matching + filling over every template. Each matched candidate is filled
// with the source tokens as context; identical outputs are kept once, in
// first-seen order.
Generation generate_candidates(const TaggedSentence& source, std::span<const PosSequence> templates,
                               const MaskFiller& filler, const RestrictedVocab& vocab,
                               const GenerationCaps& caps = {});

}  // namespace detox

#endif  // DETOX_GENERATE_H_
