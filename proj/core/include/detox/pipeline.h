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

#ifndef DETOX_PIPELINE_H_
#define DETOX_PIPELINE_H_

#include <span>
#include <string_view>
#include <vector>

#include "detox/corpus.h"
#include "detox/edit.h"
#include "detox/generate.h"
#include "detox/lm.h"
#include "detox/postag.h"
#include "detox/retrieve.h"
#include "detox/select.h"

namespace detox {

// rgs skips the editor; rges edits candidates before selection.
enum class Variant { kRgs, kRges };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

// The source with every restricted token deleted.
Tokens remove_restricted(std::span<const std::string> tokens, const RestrictedVocab& vocab);

struct PipelineHandles {
  const Tagger* tagger = nullptr;
  const PosIndex* index = nullptr;
  const MaskFiller* filler = nullptr;
  const Scorer* scorer = nullptr;
  const RestrictedVocab* vocab = nullptr;
  const Editor* editor = nullptr;  // required for rges
};

struct PipelineOptions {
  size_t k = 10;
  GenerationCaps caps;
  // On editor failure, keep the unedited candidates instead of failing.
  bool editor_fallback_identity = false;
};

class TransferPipeline {
 public:
  TransferPipeline(PipelineHandles handles, PipelineOptions options);

  // Non-offensive inputs pass through unchanged. Offensive inputs always
  // yield a restricted-free output: when no candidate survives, the output
  // falls back to remove_restricted and fallback_used is set.
  TransferResult transfer(const LabeledSentence& sentence, Variant variant) const;

  // Results in input order for any `jobs`.
  std::vector<TransferResult> transfer_all(std::span<const LabeledSentence> sentences,
                                           Variant variant, size_t jobs = 1) const;

 private:
  TransferResult removal_fallback(const LabeledSentence& sentence, size_t candidate_count,
                                  std::string reason) const;

  PipelineHandles h_;
  PipelineOptions options_;
};

}  // namespace detox

#endif  // DETOX_PIPELINE_H_
