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

#include "detox/pipeline.h"

#include "detox/error.h"
#include "detox/parallel.h"
#include "log_event.h"

namespace detox {

std::string_view variant_name(Variant v) { return v == Variant::kRgs ? "rgs" : "rges"; }

Variant parse_variant(std::string_view name) {
  if (name == "rgs") return Variant::kRgs;
  if (name == "rges") return Variant::kRges;
  throw Error(ErrorCode::kInvalidArgument, "unknown variant '" + std::string(name) + "'");
}

Tokens remove_restricted(std::span<const std::string> tokens, const RestrictedVocab& vocab) {
  Tokens out;
  for (const auto& t : tokens) {
    if (!is_restricted(vocab, t)) out.push_back(t);
  }
  return out;
}

TransferPipeline::TransferPipeline(PipelineHandles handles, PipelineOptions options)
    : h_(handles), options_(options) {
  if (!h_.tagger || !h_.index || !h_.filler || !h_.scorer || !h_.vocab) {
    throw Error(ErrorCode::kInvalidArgument, "pipeline handles are incomplete");
  }
  if (options_.k < 1) throw Error(ErrorCode::kInvalidArgument, "retrieval k must be >= 1");
}

TransferResult TransferPipeline::removal_fallback(const LabeledSentence& sentence,
                                                  size_t candidate_count,
                                                  std::string reason) const {
  internal::log_event("fallback", {{"id", sentence.id}, {"reason", reason}});
  TransferResult r;
  r.source = sentence;
  r.output = remove_restricted(sentence.tokens, *h_.vocab);
  r.candidate_count = candidate_count;
  r.fallback_used = true;
  r.fallback_reason = std::move(reason);
  return r;
}

TransferResult TransferPipeline::transfer(const LabeledSentence& sentence, Variant variant) const {
  if (!contains_restricted(*h_.vocab, sentence.tokens)) {
    TransferResult r;
    r.source = sentence;
    r.output = sentence.tokens;
    r.passthrough = true;
    return r;
  }
  if (variant == Variant::kRges && !h_.editor) {
    throw Error(ErrorCode::kInvalidArgument, "rges requires an editor");
  }

  const TaggedSentence tagged = tag_and_mark(sentence, *h_.tagger, *h_.vocab);
  std::vector<PosSequence> templates;
  for (auto& hit : h_.index->query_similar(PosSequence(tagged.tags), options_.k)) {
    templates.push_back(std::move(hit.sequence));
  }

  Generation gen;
  try {
    gen = generate_candidates(tagged, templates, *h_.filler, *h_.vocab, options_.caps);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCandidatePoolEmpty) throw;
    return removal_fallback(sentence, 0, "filler: " + std::string(e.what()));
  }
  {
    nlohmann::ordered_json per_tag = nlohmann::ordered_json::array();
    for (const auto& t : gen.stats.templates) per_tag.push_back(t.assignments_per_tag);
    internal::log_event("generation", {{"id", sentence.id},
                                       {"templates", templates.size()},
                                       {"assignments_per_tag", per_tag},
                                       {"matched_candidates", gen.stats.matched_candidates},
                                       {"unique_outputs", gen.stats.unique_outputs},
                                       {"cap_hit", gen.stats.cap_hit}});
  }
  if (gen.candidates.empty()) return removal_fallback(sentence, 0, "no candidates generated");

  TransferResult r;
  r.source = sentence;
  r.candidate_count = gen.candidates.size();

  std::vector<ScoredCandidate> scored;
  if (variant == Variant::kRges) {
    std::vector<Tokens> edited;
    try {
      edited = edit_candidates(gen.candidates, *h_.editor);
    } catch (const EditError& e) {
      if (!options_.editor_fallback_identity) throw;
      internal::log_event("editor_fallback",
                          {{"id", sentence.id}, {"completed", e.completed()}, {"error", e.what()}});
      edited = gen.candidates;
    }
    try {
      scored = score_candidates(sentence.tokens, edited, *h_.scorer, *h_.vocab);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyAfterFilter) throw;
      r.fallback_used = true;
      r.fallback_reason = "all edited candidates restricted";
      internal::log_event("fallback", {{"id", sentence.id}, {"reason", r.fallback_reason}});
    }
  }
  if (scored.empty()) {
    try {
      scored = score_candidates(sentence.tokens, gen.candidates, *h_.scorer, *h_.vocab);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyAfterFilter) throw;
      return removal_fallback(sentence, gen.candidates.size(), "all candidates restricted");
    }
  }
  const ScoredCandidate& best = select_best(scored);
  r.output = best.tokens;
  r.selected = best;
  return r;
}

std::vector<TransferResult> TransferPipeline::transfer_all(std::span<const LabeledSentence> sentences,
                                                           Variant variant, size_t jobs) const {
  std::vector<TransferResult> out(sentences.size());
  parallel_for(sentences.size(), jobs, [&](size_t i) { out[i] = transfer(sentences[i], variant); });
  return out;
}

}  // namespace detox
