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

#ifndef DETOX_METRICS_H_
#define DETOX_METRICS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "detox/corpus.h"
#include "detox/lm.h"

namespace detox {

// Corpus BLEU-4: clipped n-gram matches and hypothesis n-gram totals pooled
// over the corpus, geometric mean of the precisions, brevity penalty
// exp(1 - r/c) when c <= r. Orders for which the corpus holds no hypothesis
// n-gram at all are left out of the mean; a zero precision yields 0.
double bleu_corpus(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                   int max_order = 4);

// Sentence BLEU with add-one smoothing on orders >= 2.
double sentence_bleu(std::span<const std::string> hypothesis,
                     std::span<const std::string> reference, int max_order = 4);

size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);
// ROUGE-L F1 of one pair: P = LCS/|hyp|, R = LCS/|ref|, 0 when LCS = 0.
double rouge_l_sentence(std::span<const std::string> hypothesis,
                        std::span<const std::string> reference);
// Mean sentence ROUGE-L F1.
double rouge_l(std::span<const Tokens> hypotheses, std::span<const Tokens> references);

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

struct MeteorAlignment {
  size_t matches = 0;
  size_t chunks = 0;
};

// Exact-match unigram alignment. Repeatedly links the longest run of
// identical, still-unaligned words (earliest hypothesis position first,
// then earliest reference position), which maximizes matches and keeps
// chunks low.
MeteorAlignment meteor_align(std::span<const std::string> hypothesis,
                             std::span<const std::string> reference);
double meteor_sentence(std::span<const std::string> hypothesis,
                       std::span<const std::string> reference, const MeteorParams& params = {});
// Mean sentence METEOR.
double meteor(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
              const MeteorParams& params = {});

// Percentage of outputs with no restricted token.
double transfer_accuracy(std::span<const Tokens> outputs, const RestrictedVocab& vocab);

double avg_perplexity(std::span<const Tokens> outputs, const Scorer& scorer, bool with_end = true);

// Plain-text embeddings: "word v1 v2 ... vd" per line, uniform d.
class EmbeddingTable {
 public:
  static EmbeddingTable parse(std::string_view text);
  static EmbeddingTable load(const std::filesystem::path& path);
  void add(std::string word, std::vector<double> vec);

  size_t dim() const { return dim_; }
  size_t size() const { return table_.size(); }
  // Exact match first, then the lowercased form. nullptr when absent.
  const std::vector<double>* find(std::string_view word) const;

 private:
  size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> table_;
};

// [min ; mean ; max] pooling of word vectors. OOV words count as zero
// vectors in the mean and are skipped by min and max.
std::vector<double> pooled_sentence_vector(std::span<const std::string> tokens,
                                           const EmbeddingTable& table);
double cosine(std::span<const double> a, std::span<const double> b);
// Mean cosine between pooled hypothesis and source vectors. Throws kZeroNorm
// when a pooled vector is all zeros.
double fu_content_preservation(std::span<const Tokens> hypotheses, std::span<const Tokens> sources,
                               const EmbeddingTable& table);

struct EvalReport {
  size_t n = 0;
  double bleu = 0.0;    // [0, 1]
  double rouge = 0.0;   // [0, 1]
  double meteor = 0.0;  // [0, 1]
  std::optional<double> fucp;
  double accuracy = 0.0;  // percent
  std::optional<double> avg_ppl;
};

struct EvalInputs {
  std::span<const Tokens> outputs;
  std::span<const Tokens> sources;
  const RestrictedVocab* vocab = nullptr;
  const Scorer* scorer = nullptr;            // optional
  const EmbeddingTable* embeddings = nullptr;  // optional
};

EvalReport evaluate(const EvalInputs& inputs);

// Pretty JSON with bleu/rouge/meteor also given x100.
std::string report_json(const EvalReport& report);
// Columns: BL RG MT FuCP Acc PPL (BL/RG/MT x100, one decimal; FuCP three
// decimals; missing values as "NA").
std::string report_tsv_header();
std::string report_tsv_row(const EvalReport& report);

}  // namespace detox

#endif  // DETOX_METRICS_H_
