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

#ifndef DETOX_POSTAG_H_
#define DETOX_POSTAG_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "detox/corpus.h"
#include "detox/pos_tag.h"
#include "detox/remote.h"

namespace detox {

namespace internal {
class JsonClient;
}

// A non-empty ordered list of tags; the retrieval key and template unit.
class PosSequence {
 public:
  // Throws kInvalidArgument when `tags` is empty.
  explicit PosSequence(std::vector<PosTag> tags);

  const std::vector<PosTag>& tags() const { return tags_; }
  size_t size() const { return tags_.size(); }
  PosTag operator[](size_t i) const { return tags_[i]; }
  bool contains(PosTag tag) const;

  bool operator==(const PosSequence&) const = default;
  auto operator<=>(const PosSequence&) const = default;

 private:
  std::vector<PosTag> tags_;
};

std::string to_string(const PosSequence& seq);

class Tagger {
 public:
  virtual ~Tagger() = default;
  // One tag per token. Implementations must be safe to call concurrently.
  virtual std::vector<PosTag> tag(std::span<const std::string> tokens) const = 0;
};

// Deterministic lexicon + suffix-rule tagger. Closed-class words come from a
// built-in word list; open-class words are guessed from suffixes and the
// previous tag, with NOUN as the fallback.
class RuleTagger final : public Tagger {
 public:
  RuleTagger();
  std::vector<PosTag> tag(std::span<const std::string> tokens) const override;

 private:
  PosTag guess(std::string_view token, std::string_view lower, bool sentence_initial,
               PosTag previous) const;

  std::unordered_map<std::string, PosTag> lexicon_;
};

// Client for POST /tag on the model server. Tags outside the Universal set
// become X and are reported on the diagnostic stream.
class RemoteTagger final : public Tagger {
 public:
  explicit RemoteTagger(RemoteEndpoint endpoint);
  ~RemoteTagger() override;
  std::vector<PosTag> tag(std::span<const std::string> tokens) const override;

 private:
  std::unique_ptr<internal::JsonClient> client_;
};

// Validates input (non-empty, no empty token) and output length.
std::vector<PosTag> tag_sentence(std::span<const std::string> tokens, const Tagger& tagger);

// Sentence plus tags; after tag_and_mark, tags[j] == kBw exactly where
// tokens[j] is restricted.
struct TaggedSentence {
  LabeledSentence base;
  std::vector<PosTag> tags;

  const Tokens& tokens() const { return base.tokens; }
  bool operator==(const TaggedSentence&) const = default;
};

// Tag j becomes kBw iff tokens[j] is restricted; every other tag is kept.
PosSequence substitute_bw(const TaggedSentence& tagged, const RestrictedVocab& vocab);

TaggedSentence tag_and_mark(LabeledSentence sentence, const Tagger& tagger,
                            const RestrictedVocab& vocab);

}  // namespace detox

#endif  // DETOX_POSTAG_H_
