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

#ifndef DETOX_RETRIEVE_H_
#define DETOX_RETRIEVE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "detox/postag.h"

namespace detox {

// Index terms are POS unigrams plus adjacent POS bigrams. kBw contributes
// no unigram, and any bigram touching a kBw position is dropped.
using TermId = uint16_t;
inline constexpr size_t kTermCount =
    kUniversalTagCount + kUniversalTagCount * kUniversalTagCount;
inline constexpr int kIndexFormatVersion = 1;
inline constexpr double kScoreResolution = 1e12;

std::string term_name(TermId term);
// Sorted by term id; each entry is (term, raw count).
std::vector<std::pair<TermId, uint32_t>> extract_terms(std::span<const PosTag> tags);

struct RetrievalHit {
  size_t doc_id = 0;
  PosSequence sequence;
  double score = 0.0;
  bool exact_match = false;
};

// TF-IDF inverted index over unique POS sequences.
//   tf  = sqrt(raw count)
//   idf = 1 + ln(doc_count / (df + 1))
// Document and query vectors are L2-normalized; the score is their cosine.
// Hits are ordered by descending score (compared at 1e-12 resolution), then
// by smaller |length - query length|, then by ascending doc id.
class PosIndex {
 public:
  // Throws kEmptyIndex on empty input and kCorruptCorpus if any sequence
  // holds kBw. Identical sequences collapse into one document.
  static PosIndex build(std::span<const PosSequence> sequences);

  double score(const PosSequence& query, size_t doc_id) const;
  std::vector<RetrievalHit> query_similar(const PosSequence& query, size_t k = 10,
                                          bool exclude_exact = false) const;

  size_t doc_count() const { return docs_.size(); }
  const PosSequence& document(size_t doc_id) const { return docs_.at(doc_id); }
  uint32_t multiplicity(size_t doc_id) const { return multiplicity_.at(doc_id); }
  size_t document_frequency(TermId term) const { return postings_.at(term).size(); }
  double idf(TermId term) const { return idf_.at(term); }
  double doc_norm(size_t doc_id) const { return norms_.at(doc_id); }
  std::optional<size_t> find(const PosSequence& seq) const;

  // Directory layout: manifest.json, postings.jsonl, documents.jsonl.
  void save(const std::filesystem::path& dir) const;
  // Rejects unknown format versions and postings that disagree with the
  // documents file.
  static PosIndex load(const std::filesystem::path& dir);

 private:
  struct Posting {
    uint32_t doc;
    uint32_t count;
    double weight;  // normalized tf-idf weight of the term in this document
  };
  struct SeqHash {
    size_t operator()(const PosSequence& s) const;
  };

  static PosIndex from_unique(std::vector<PosSequence> docs, std::vector<uint32_t> multiplicity);
  std::vector<std::pair<TermId, double>> query_vector(const PosSequence& query,
                                                      double* norm) const;

  std::vector<PosSequence> docs_;
  std::vector<uint32_t> multiplicity_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<double> idf_;
  std::vector<double> norms_;
  std::unordered_map<PosSequence, size_t, SeqHash> lookup_;
};

}  // namespace detox

#endif  // DETOX_RETRIEVE_H_
