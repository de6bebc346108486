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

#ifndef DETOX_CORPUS_H_
#define DETOX_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "detox/text.h"

namespace detox {

// Lowercases and strips leading/trailing non-alphanumeric characters.
// Idempotent: normalize_token(normalize_token(t)) == normalize_token(t).
std::string normalize_token(std::string_view token);

// The restricted word set. Terms are stored normalized; the set is never
// empty and never holds a term with internal whitespace.
class RestrictedVocab {
 public:
  // Throws kEmptyVocab if no term survives normalization and
  // kInvalidArgument if a term contains whitespace.
  explicit RestrictedVocab(std::span<const std::string> terms);
  RestrictedVocab(std::initializer_list<std::string> terms);

  // `term` must already be normalized.
  bool contains(std::string_view term) const;
  size_t size() const { return terms_.size(); }
  std::vector<std::string> sorted_terms() const;

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> terms_;
};

// One term per line, UTF-8. Blank lines are skipped and duplicates collapse.
RestrictedVocab load_restricted_vocab(const std::filesystem::path& path);
RestrictedVocab parse_restricted_vocab(std::string_view text);

bool is_restricted(const RestrictedVocab& vocab, std::string_view token);
bool contains_restricted(const RestrictedVocab& vocab, std::span<const std::string> tokens);

enum class Label { kOffensive, kNonOffensive };

std::string_view label_name(Label label);
Label parse_label(std::string_view name);
Label label_for(const RestrictedVocab& vocab, std::span<const std::string> tokens);

struct LabeledSentence {
  std::string id;
  Tokens tokens;
  Label label = Label::kNonOffensive;

  bool operator==(const LabeledSentence&) const = default;
};

LabeledSentence make_labeled(std::string id, Tokens tokens, const RestrictedVocab& vocab);

// Sentence-level noise rules. Each rule is a named case-insensitive regex;
// a sentence is noisy when any rule finds a match anywhere in it.
class NoiseFilter {
 public:
  struct Rule {
    std::string name;
    std::string pattern;
    std::regex regex;
  };

  // Format: one rule per line, "name<TAB>pattern"; '#' starts a comment line.
  static NoiseFilter parse(std::string_view text);
  static NoiseFilter load(const std::filesystem::path& path);
  // The six stock rules: url, email, date, time, number, emoticon.
  static const NoiseFilter& defaults();

  // Name of the first matching rule.
  std::optional<std::string_view> match(std::string_view sentence) const;
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

// Text of the stock rule file shipped as data/noise_filters.tsv.
extern const std::string_view kDefaultNoiseFilterRules;

// Splits at runs of '.', '!' or '?' followed by whitespace or end of text.
// Newlines are hard boundaries as well.
std::vector<std::string> split_sentences(std::string_view raw);

// Whitespace tokenization with trailing punctuation split into its own token:
// "clowns." -> {"clowns", "."}. Units made only of punctuation stay whole.
Tokens tokenize(std::string_view sentence);

struct LengthBounds {
  size_t min_len = 5;
  size_t max_len = 20;
};

Tokens tokenize_if_clean(std::string_view sentence, LengthBounds bounds,
                         const NoiseFilter& filter);

std::vector<Tokens> extract_and_filter(std::string_view raw_text, LengthBounds bounds = {},
                                       const NoiseFilter& filter = NoiseFilter::defaults());

// True when at least `threshold` of the non-space, non-punctuation characters
// are ASCII letters. Multi-byte UTF-8 sequences count as one character.
bool is_mostly_english(std::span<const std::string> tokens, double threshold = 0.9);

struct SplitProportions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct CorpusSplits {
  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> validation;
  std::vector<LabeledSentence> test;
  uint64_t seed = 0;
};

// Splits each label class separately: per class, train gets round(n * train)
// sentences, validation round(n * validation), test the remainder. When
// `subsample_nonoffensive_to` is set, the non-offensive class is uniformly
// downsampled to that size first.
CorpusSplits build_splits(std::span<const LabeledSentence> sentences, SplitProportions proportions,
                          std::optional<size_t> subsample_nonoffensive_to, uint64_t seed);

}  // namespace detox

#endif  // DETOX_CORPUS_H_
