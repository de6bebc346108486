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

#ifndef DETOX_NGRAM_H_
#define DETOX_NGRAM_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "detox/lm.h"

namespace detox {

struct NgramOptions {
  int order = 3;
  double discount = 0.75;
  // Predict an end-of-sentence event after each sentence.
  bool end_event = true;
  // Reserve an <unk> symbol so unseen words get probability mass.
  bool open_vocab = true;
};

inline constexpr int kNgramFormatVersion = 1;

// Interpolated absolute-discounting n-gram model over lowercased tokens:
//
//   p_m(w | h) = max(c(h,w) - D, 0) / c(h) + D * N1+(h) / c(h) * p_{m-1}(w | h')
//
// where h' drops the oldest word of h, N1+(h) counts distinct successors of
// h, and p_0 is uniform over the predictable symbols (training words, plus
// </s> and <unk> when enabled). Unseen histories back off to p_{m-1}.
class NgramModel final : public Scorer {
 public:
  using WordId = uint32_t;
  static constexpr WordId kBos = 0;
  static constexpr WordId kEos = 1;
  static constexpr WordId kUnk = 2;

  // Throws kInvalidArgument for order outside [1, 5], discount outside (0, 1),
  // or a corpus with no tokens.
  static NgramModel train(std::span<const Tokens> corpus, NgramOptions options = {});

  // p(word | history), history being the preceding tokens of the sentence.
  double prob(std::span<const std::string> history, std::string_view word) const;
  double end_prob(std::span<const std::string> history) const;

  SequenceLogProb log_prob(std::span<const std::string> tokens, bool with_end) const override;

  const NgramOptions& options() const { return options_; }
  // Number of symbols p_0 spreads over.
  size_t predictable_count() const;
  // Training words (no special tokens), most frequent first, ties broken
  // lexicographically. `limit` == 0 means all.
  std::vector<std::string> ranked_vocabulary(size_t limit = 0) const;

  // Id-level access used by the filler.
  std::optional<WordId> find_id(std::string_view lowercased) const;
  WordId id_or_unk(std::string_view token) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  // Pads with <s> and keeps the last order-1 ids.
  std::vector<WordId> history_ids(std::span<const std::string> history) const;
  double prob_ids(std::span<const WordId> history, WordId w) const;

  // JSON-lines: a header object then {"context": [...], "word": w, "count": n}
  // records sorted by context length, context and word.
  void save(std::ostream& out) const;
  void save_file(const std::filesystem::path& path) const;
  static NgramModel load(std::istream& in);
  static NgramModel load_file(const std::filesystem::path& path);

 private:
  struct ContextStats {
    uint64_t total = 0;
    std::unordered_map<WordId, uint32_t> counts;
  };
  struct KeyHash {
    using is_transparent = void;
    size_t operator()(std::span<const WordId> key) const;
    size_t operator()(const std::vector<WordId>& key) const {
      return (*this)(std::span<const WordId>(key));
    }
  };
  struct KeyEq {
    using is_transparent = void;
    bool operator()(std::span<const WordId> a, std::span<const WordId> b) const {
      return std::equal(a.begin(), a.end(), b.begin(), b.end());
    }
  };
  using Level = std::unordered_map<std::vector<WordId>, ContextStats, KeyHash, KeyEq>;

  WordId intern(const std::string& lowercased);
  void add_count(std::span<const WordId> context, WordId w, uint32_t count);
  void validate_options() const;

  NgramOptions options_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::vector<Level> levels_;  // levels_[m] holds histories of length m
};

// Fills MASK slots left to right. Each MASK takes the candidate-pool word w
// maximizing p(w | left history) * p(right | history, w), where `right` is
// the next slot when it is a fixed word, the end event when the MASK is the
// last slot, and omitted when the next slot is another MASK. Ties go to the
// more frequent word. The separator makes the slots a fresh sentence, so the
// n-gram window never reaches into the context.
class NgramFiller final : public MaskFiller {
 public:
  explicit NgramFiller(std::shared_ptr<const NgramModel> model, size_t pool_size = 5000);

  std::vector<std::string> fill(std::span<const std::string> context, std::span<const Slot> slots,
                                const FillConstraint& constraint) const override;

  std::span<const NgramModel::WordId> pool() const { return pool_; }

 private:
  std::vector<NgramModel::WordId> ranked_for(std::span<const NgramModel::WordId> history,
                                             std::optional<NgramModel::WordId> right,
                                             size_t keep) const;

  std::shared_ptr<const NgramModel> model_;
  std::vector<NgramModel::WordId> pool_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::vector<NgramModel::WordId>> cache_;
};

}  // namespace detox

#endif  // DETOX_NGRAM_H_
