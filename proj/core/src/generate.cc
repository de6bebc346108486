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

#include "detox/generate.h"

#include <algorithm>
#include <limits>
#include <set>

#include "detox/error.h"

namespace detox {

MatchPlan plan_match(const TaggedSentence& source, const PosSequence& templ) {
  if (templ.contains(PosTag::kBw)) {
    throw Error(ErrorCode::kInvalidArgument, "template holds a BW tag: " + to_string(templ));
  }
  if (source.tags.size() != source.tokens().size()) {
    throw Error(ErrorCode::kLengthMismatch, "source sentence tags and tokens differ in length");
  }
  std::set<PosTag> in_source(source.tags.begin(), source.tags.end());
  std::set<PosTag> in_template(templ.tags().begin(), templ.tags().end());
  MatchPlan plan;
  for (PosTag tag : in_source) {
    if (tag == PosTag::kBw || !in_template.contains(tag)) continue;
    TagMatch m{tag, {}, {}};
    for (size_t i = 0; i < source.tags.size(); ++i) {
      if (source.tags[i] == tag) m.words.push_back(i);
    }
    for (size_t j = 0; j < templ.size(); ++j) {
      if (templ[j] == tag) m.positions.push_back(j);
    }
    plan.shared.push_back(std::move(m));
  }
  return plan;
}

uint64_t permutations(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  uint64_t out = 1;
  for (uint64_t i = 0; i < k; ++i) {
    const uint64_t f = n - i;
    if (out > std::numeric_limits<uint64_t>::max() / f) return std::numeric_limits<uint64_t>::max();
    out *= f;
  }
  return out;
}

namespace {

// Lexicographic enumeration of injective maps from `k` choosers into `n`
// choices; `emit` receives the choice index per chooser. Stops after `cap`.
template <typename Emit>
void enumerate_injections(size_t k, size_t n, size_t cap, Emit&& emit) {
  std::vector<size_t> pick(k);
  std::vector<bool> used(n, false);
  size_t emitted = 0;
  // Iterative DFS: depth d tries choices starting at pick[d].
  size_t depth = 0;
  if (k == 0) return;
  pick[0] = 0;
  while (true) {
    if (emitted >= cap) return;
    size_t c = pick[depth];
    while (c < n && used[c]) ++c;
    if (c == n) {
      if (depth == 0) return;
      --depth;
      used[pick[depth]] = false;
      ++pick[depth];
      continue;
    }
    pick[depth] = c;
    if (depth + 1 == k) {
      emit(std::span<const size_t>(pick));
      ++emitted;
      ++pick[depth];
      continue;
    }
    used[c] = true;
    ++depth;
    pick[depth] = 0;
  }
}

}  // namespace

std::vector<Assignment> enumerate_assignments(std::span<const size_t> words,
                                              std::span<const size_t> positions, size_t cap) {
  if (cap < 1) throw Error(ErrorCode::kInvalidArgument, "assignment cap must be >= 1");
  std::vector<Assignment> out;
  const size_t n = words.size(), m = positions.size();
  if (n == 0 || m == 0) return out;
  if (n <= m) {
    enumerate_injections(n, m, cap, [&](std::span<const size_t> pick) {
      Assignment a;
      for (size_t w = 0; w < n; ++w) a.placements.push_back({words[w], positions[pick[w]]});
      std::sort(a.placements.begin(), a.placements.end(),
                [](const Placement& x, const Placement& y) { return x.slot < y.slot; });
      out.push_back(std::move(a));
    });
  } else {
    enumerate_injections(m, n, cap, [&](std::span<const size_t> pick) {
      Assignment a;
      for (size_t p = 0; p < m; ++p) a.placements.push_back({words[pick[p]], positions[p]});
      out.push_back(std::move(a));
    });
  }
  return out;
}

CandidateSlots empty_candidate(size_t length, size_t template_id) {
  CandidateSlots c;
  c.slots.assign(length, std::nullopt);
  c.template_id = template_id;
  return c;
}

CandidateSlots apply_assignment(const Assignment& assignment, const CandidateSlots& candidate,
                                std::span<const std::string> source_tokens) {
  CandidateSlots out = candidate;
  for (const Placement& p : assignment.placements) {
    if (p.slot >= out.slots.size() || p.source_index >= source_tokens.size()) {
      throw Error(ErrorCode::kLogic, "placement out of range");
    }
    if (out.slots[p.slot]) {
      throw Error(ErrorCode::kLogic, "slot " + std::to_string(p.slot) + " is already filled");
    }
    out.slots[p.slot] = source_tokens[p.source_index];
    out.provenance.push_back(p);
  }
  return out;
}

std::vector<CandidateSlots> match_template(const TaggedSentence& source, const PosSequence& templ,
                                           size_t template_id, const GenerationCaps& caps,
                                           TemplateStats* stats) {
  const MatchPlan plan = plan_match(source, templ);
  std::vector<std::vector<Assignment>> per_tag;
  uint64_t uncapped = 1;
  for (const auto& m : plan.shared) {
    per_tag.push_back(enumerate_assignments(m.words, m.positions, caps.per_tag));
    const size_t n = m.words.size(), k = m.positions.size();
    const uint64_t p = permutations(std::max(n, k), std::min(n, k));
    uncapped = uncapped > std::numeric_limits<uint64_t>::max() / std::max<uint64_t>(p, 1)
                   ? std::numeric_limits<uint64_t>::max()
                   : uncapped * p;
  }

  std::vector<CandidateSlots> out;
  const size_t cap = caps.per_template;
  // Odometer over per-tag assignment lists; the first tag is the most
  // significant digit, matching the expansion order of the algorithm.
  std::vector<size_t> digit(per_tag.size(), 0);
  while (out.size() < cap) {
    CandidateSlots c = empty_candidate(templ.size(), template_id);
    for (size_t t = 0; t < per_tag.size(); ++t) {
      c = apply_assignment(per_tag[t][digit[t]], c, source.tokens());
    }
    out.push_back(std::move(c));
    bool exhausted = true;
    for (size_t t = per_tag.size(); t-- > 0;) {
      if (++digit[t] < per_tag[t].size()) {
        exhausted = false;
        break;
      }
      digit[t] = 0;
    }
    if (exhausted) break;
  }

  if (stats) {
    stats->template_id = template_id;
    stats->assignments_per_tag.clear();
    for (const auto& a : per_tag) stats->assignments_per_tag.push_back(a.size());
    stats->uncapped_candidates = uncapped;
    stats->matched_candidates = out.size();
  }
  return out;
}

Generation generate_candidates(const TaggedSentence& source, std::span<const PosSequence> templates,
                               const MaskFiller& filler, const RestrictedVocab& vocab,
                               const GenerationCaps& caps) {
  if (caps.per_tag < 1 || caps.per_template < 1 || caps.per_sentence < 1) {
    throw Error(ErrorCode::kInvalidArgument, "generation caps must be >= 1");
  }
  TaggedSentence marked = source;
  marked.tags = substitute_bw(source, vocab).tags();

  Generation gen;
  const FillConstraint constraint(vocab);
  std::set<Tokens> seen;
  size_t budget = caps.per_sentence;
  for (size_t t = 0; t < templates.size() && budget > 0; ++t) {
    GenerationCaps local = caps;
    local.per_template = std::min(caps.per_template, budget);
    TemplateStats ts;
    auto matched = match_template(marked, templates[t], t, local, &ts);
    if (ts.uncapped_candidates > matched.size()) gen.stats.cap_hit = true;
    budget -= matched.size();
    gen.stats.matched_candidates += matched.size();
    gen.stats.templates.push_back(std::move(ts));
    for (const auto& c : matched) {
      Tokens filled = fill_slots(marked.tokens(), c.slots, constraint, filler);
      if (seen.insert(filled).second) gen.candidates.push_back(std::move(filled));
    }
  }
  gen.stats.unique_outputs = gen.candidates.size();
  return gen;
}

}  // namespace detox
