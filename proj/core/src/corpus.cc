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

#include "detox/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "detox/error.h"
#include "detox/rng.h"

namespace detox {

std::string normalize_token(std::string_view token) {
  size_t b = 0, e = token.size();
  while (b < e && !is_ascii_alnum(token[b])) ++b;
  while (e > b && !is_ascii_alnum(token[e - 1])) --e;
  return to_lower_ascii(token.substr(b, e - b));
}

RestrictedVocab::RestrictedVocab(std::span<const std::string> terms) {
  for (const auto& raw : terms) {
    std::string_view t = trim(raw);
    if (t.empty()) continue;
    if (std::any_of(t.begin(), t.end(), [](char c) { return c == ' ' || c == '\t'; })) {
      throw Error(ErrorCode::kInvalidArgument,
                  "restricted term contains whitespace: '" + std::string(t) + "'");
    }
    std::string n = normalize_token(t);
    if (!n.empty()) terms_.insert(std::move(n));
  }
  if (terms_.empty()) throw Error(ErrorCode::kEmptyVocab, "restricted vocabulary is empty");
}

RestrictedVocab::RestrictedVocab(std::initializer_list<std::string> terms)
    : RestrictedVocab(std::span<const std::string>(terms.begin(), terms.size())) {}

bool RestrictedVocab::contains(std::string_view term) const {
  return terms_.find(term) != terms_.end();
}

std::vector<std::string> RestrictedVocab::sorted_terms() const {
  std::vector<std::string> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end());
  return out;
}

RestrictedVocab parse_restricted_vocab(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return RestrictedVocab(lines);
}

RestrictedVocab load_restricted_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read vocabulary file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_restricted_vocab(buf.str());
}

bool is_restricted(const RestrictedVocab& vocab, std::string_view token) {
  std::string n = normalize_token(token);
  return !n.empty() && vocab.contains(n);
}

bool contains_restricted(const RestrictedVocab& vocab, std::span<const std::string> tokens) {
  return std::any_of(tokens.begin(), tokens.end(),
                     [&](const std::string& t) { return is_restricted(vocab, t); });
}

std::string_view label_name(Label label) {
  return label == Label::kOffensive ? "offensive" : "non-offensive";
}

Label parse_label(std::string_view name) {
  if (name == "offensive") return Label::kOffensive;
  if (name == "non-offensive") return Label::kNonOffensive;
  throw Error(ErrorCode::kParse, "unknown label '" + std::string(name) + "'");
}

Label label_for(const RestrictedVocab& vocab, std::span<const std::string> tokens) {
  return contains_restricted(vocab, tokens) ? Label::kOffensive : Label::kNonOffensive;
}

LabeledSentence make_labeled(std::string id, Tokens tokens, const RestrictedVocab& vocab) {
  Label label = label_for(vocab, tokens);
  return LabeledSentence{std::move(id), std::move(tokens), label};
}

std::vector<std::string> split_sentences(std::string_view raw) {
  std::vector<std::string> out;
  auto push = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty()) out.emplace_back(s);
  };
  size_t start = 0;
  for (size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\n') {
      push(raw.substr(start, i - start));
      start = i + 1;
      continue;
    }
    if (c == '.' || c == '!' || c == '?') {
      bool at_end = i + 1 == raw.size();
      char next = at_end ? ' ' : raw[i + 1];
      if (next == ' ' || next == '\t' || next == '\n' || next == '\r') {
        push(raw.substr(start, i + 1 - start));
        start = i + 1;
      }
    }
  }
  if (start < raw.size()) push(raw.substr(start));
  return out;
}

Tokens tokenize(std::string_view sentence) {
  Tokens out;
  for (auto& unit : split_whitespace(sentence)) {
    size_t e = unit.size();
    while (e > 0 && is_ascii_punct(unit[e - 1])) --e;
    if (e == 0 || e == unit.size()) {
      out.push_back(std::move(unit));
    } else {
      out.push_back(unit.substr(0, e));
      out.push_back(unit.substr(e));
    }
  }
  return out;
}

Tokens tokenize_if_clean(std::string_view sentence, LengthBounds bounds,
                         const NoiseFilter& filter) {
  if (filter.match(sentence)) return {};
  Tokens tokens = tokenize(sentence);
  if (tokens.size() < bounds.min_len || tokens.size() > bounds.max_len) return {};
  return tokens;
}

std::vector<Tokens> extract_and_filter(std::string_view raw_text, LengthBounds bounds,
                                       const NoiseFilter& filter) {
  if (bounds.min_len < 1 || bounds.max_len < bounds.min_len) {
    throw Error(ErrorCode::kInvalidArgument, "length bounds require 1 <= min_len <= max_len");
  }
  std::vector<Tokens> out;
  for (const auto& sentence : split_sentences(raw_text)) {
    Tokens tokens = tokenize_if_clean(sentence, bounds, filter);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

bool is_mostly_english(std::span<const std::string> tokens, double threshold) {
  size_t letters = 0, total = 0;
  for (const auto& t : tokens) {
    for (size_t i = 0; i < t.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(t[i]);
      if (c >= 0x80) {
        // Count only lead bytes so a multi-byte character counts once.
        if ((c & 0xC0) != 0x80) ++total;
        continue;
      }
      if (is_ascii_punct(static_cast<char>(c)) || c <= ' ') continue;
      ++total;
      if (is_ascii_alpha(static_cast<char>(c))) ++letters;
    }
  }
  if (total == 0) return false;
  return static_cast<double>(letters) >= threshold * static_cast<double>(total);
}

CorpusSplits build_splits(std::span<const LabeledSentence> sentences, SplitProportions proportions,
                          std::optional<size_t> subsample_nonoffensive_to, uint64_t seed) {
  const double sum = proportions.train + proportions.validation + proportions.test;
  if (std::abs(sum - 1.0) > 1e-9 || proportions.train < 0 || proportions.validation < 0 ||
      proportions.test < 0) {
    throw Error(ErrorCode::kInvalidArgument, "split proportions must be non-negative and sum to 1");
  }
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& s : sentences) {
      if (!ids.insert(s.id).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate sentence id '" + s.id + "'");
      }
    }
  }

  std::vector<size_t> offensive, clean;
  for (size_t i = 0; i < sentences.size(); ++i) {
    (sentences[i].label == Label::kOffensive ? offensive : clean).push_back(i);
  }

  Rng rng(seed);
  if (subsample_nonoffensive_to) {
    if (*subsample_nonoffensive_to > clean.size()) {
      throw Error(ErrorCode::kSubsampleTooLarge,
                  "cannot subsample " + std::to_string(clean.size()) + " non-offensive sentences to " +
                      std::to_string(*subsample_nonoffensive_to));
    }
    std::vector<size_t> picked;
    for (size_t k : sample_indices(clean.size(), *subsample_nonoffensive_to, rng)) {
      picked.push_back(clean[k]);
    }
    clean = std::move(picked);
  }

  CorpusSplits splits;
  splits.seed = seed;
  for (auto* cls : {&offensive, &clean}) {
    shuffle_in_place(std::span<size_t>(*cls), rng);
    const double n = static_cast<double>(cls->size());
    size_t n_train = std::min(cls->size(), static_cast<size_t>(std::llround(n * proportions.train)));
    size_t n_val = std::min(cls->size() - n_train,
                            static_cast<size_t>(std::llround(n * proportions.validation)));
    for (size_t i = 0; i < cls->size(); ++i) {
      const LabeledSentence& s = sentences[(*cls)[i]];
      if (i < n_train) {
        splits.train.push_back(s);
      } else if (i < n_train + n_val) {
        splits.validation.push_back(s);
      } else {
        splits.test.push_back(s);
      }
    }
  }
  return splits;
}

}  // namespace detox
