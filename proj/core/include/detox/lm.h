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

#ifndef DETOX_LM_H_
#define DETOX_LM_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "detox/corpus.h"
#include "detox/remote.h"

namespace detox {

namespace internal {
class JsonClient;
}

inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";
inline constexpr std::string_view kUnkToken = "<unk>";

struct SequenceLogProb {
  double log_prob = 0.0;  // natural log
  size_t events = 0;      // predicted events, including the end event if requested
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  // Throws kInvalidArgument when `with_end` is requested from a model that
  // does not predict an end-of-sentence event.
  virtual SequenceLogProb log_prob(std::span<const std::string> tokens, bool with_end) const = 0;
};

// exp(-(1/T) * sum log p), T = number of predicted events. Tokens must be
// non-empty.
double perplexity(const Scorer& scorer, std::span<const std::string> tokens,
                  bool with_end = true);

// A slot is either a fixed word or a MASK (std::nullopt).
using Slot = std::optional<std::string>;

std::vector<Slot> slots_from_strings(std::span<const std::string> words);
std::string slot_string(const Slot& slot);

// Words a filler may never emit: the restricted vocabulary plus special
// tokens.
class FillConstraint {
 public:
  explicit FillConstraint(const RestrictedVocab& restricted);

  bool allows(std::string_view word) const;
  const RestrictedVocab& restricted() const { return *restricted_; }

 private:
  const RestrictedVocab* restricted_;
  std::unordered_set<std::string> special_;
};

class MaskFiller {
 public:
  virtual ~MaskFiller() = default;
  // Returns one word per slot. Implementations must be safe to call
  // concurrently.
  virtual std::vector<std::string> fill(std::span<const std::string> context,
                                        std::span<const Slot> slots,
                                        const FillConstraint& constraint) const = 0;
};

// Checked front end for any MaskFiller: slots without MASKs are returned
// as-is without consulting the filler; otherwise the filler output must keep
// the shape, leave fixed slots byte-identical, and obey the constraint.
std::vector<std::string> fill_slots(std::span<const std::string> context,
                                    std::span<const Slot> slots, const FillConstraint& constraint,
                                    const MaskFiller& filler);

// POST /fill {"context", "slots" (MASKs as "[MASK]"), "restricted"} -> {"tokens"}.
class RemoteFiller final : public MaskFiller {
 public:
  explicit RemoteFiller(RemoteEndpoint endpoint);
  ~RemoteFiller() override;
  std::vector<std::string> fill(std::span<const std::string> context, std::span<const Slot> slots,
                                const FillConstraint& constraint) const override;

 private:
  std::unique_ptr<internal::JsonClient> client_;
};

// POST /ppl {"tokens", "end_event"} -> {"log_prob", "events"}.
class RemoteScorer final : public Scorer {
 public:
  explicit RemoteScorer(RemoteEndpoint endpoint);
  ~RemoteScorer() override;
  SequenceLogProb log_prob(std::span<const std::string> tokens, bool with_end) const override;

 private:
  std::unique_ptr<internal::JsonClient> client_;
};

}  // namespace detox

#endif  // DETOX_LM_H_
