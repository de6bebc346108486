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

#include "detox/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "detox/error.h"

namespace detox {
namespace {

void check_pairs(std::span<const Tokens> hyps, std::span<const Tokens> refs) {
  if (hyps.size() != refs.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(hyps.size()) + " hypotheses vs " +
                                                std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) throw Error(ErrorCode::kInvalidArgument, "empty hypothesis list");
}

using NgramCounts = std::map<std::vector<std::string_view>, size_t>;

NgramCounts count_ngrams(std::span<const std::string> tokens, size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> g(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++out[g];
  }
  return out;
}

// Clipped matches and hypothesis total for one order.
std::pair<size_t, size_t> clipped(std::span<const std::string> hyp,
                                  std::span<const std::string> ref, size_t n) {
  const NgramCounts h = count_ngrams(hyp, n);
  const NgramCounts r = count_ngrams(ref, n);
  size_t match = 0, total = 0;
  for (const auto& [g, c] : h) {
    total += c;
    auto it = r.find(g);
    if (it != r.end()) match += std::min(c, it->second);
  }
  return {match, total};
}

double brevity_penalty(double c, double r) { return c > r ? 1.0 : std::exp(1.0 - r / c); }

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

double bleu_corpus(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                   int max_order) {
  check_pairs(hypotheses, references);
  std::vector<size_t> match(static_cast<size_t>(max_order) + 1, 0), total(match.size(), 0);
  double c = 0.0, r = 0.0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    c += static_cast<double>(hypotheses[i].size());
    r += static_cast<double>(references[i].size());
    for (size_t n = 1; n <= static_cast<size_t>(max_order); ++n) {
      auto [m, t] = clipped(hypotheses[i], references[i], n);
      match[n] += m;
      total[n] += t;
    }
  }
  if (c == 0.0) return 0.0;
  double log_sum = 0.0;
  size_t orders = 0;
  for (size_t n = 1; n <= static_cast<size_t>(max_order); ++n) {
    if (total[n] == 0) continue;
    if (match[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(match[n]) / static_cast<double>(total[n]));
    ++orders;
  }
  return brevity_penalty(c, r) * std::exp(log_sum / static_cast<double>(orders));
}

double sentence_bleu(std::span<const std::string> hypothesis,
                     std::span<const std::string> reference, int max_order) {
  if (hypothesis.empty()) return 0.0;
  double log_sum = 0.0;
  for (size_t n = 1; n <= static_cast<size_t>(max_order); ++n) {
    auto [m, t] = clipped(hypothesis, reference, n);
    double p;
    if (n == 1) {
      if (m == 0) return 0.0;
      p = static_cast<double>(m) / static_cast<double>(t);
    } else {
      p = static_cast<double>(m + 1) / static_cast<double>(t + 1);
    }
    log_sum += std::log(p);
  }
  return brevity_penalty(static_cast<double>(hypothesis.size()),
                         static_cast<double>(reference.size())) *
         std::exp(log_sum / max_order);
}

size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_sentence(std::span<const std::string> hypothesis,
                        std::span<const std::string> reference) {
  const size_t lcs = lcs_length(hypothesis, reference);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

double rouge_l(std::span<const Tokens> hypotheses, std::span<const Tokens> references) {
  check_pairs(hypotheses, references);
  std::vector<double> scores;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    scores.push_back(rouge_l_sentence(hypotheses[i], references[i]));
  }
  return mean(scores);
}

MeteorAlignment meteor_align(std::span<const std::string> hypothesis,
                             std::span<const std::string> reference) {
  const size_t nh = hypothesis.size(), nr = reference.size();
  std::vector<bool> used_h(nh, false), used_r(nr, false);
  std::vector<long> link(nh, -1);
  while (true) {
    size_t best_len = 0, best_i = 0, best_j = 0;
    for (size_t i = 0; i < nh; ++i) {
      if (used_h[i]) continue;
      for (size_t j = 0; j < nr; ++j) {
        size_t len = 0;
        while (i + len < nh && j + len < nr && !used_h[i + len] && !used_r[j + len] &&
               hypothesis[i + len] == reference[j + len]) {
          ++len;
        }
        if (len > best_len) {
          best_len = len;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_len == 0) break;
    for (size_t t = 0; t < best_len; ++t) {
      used_h[best_i + t] = used_r[best_j + t] = true;
      link[best_i + t] = static_cast<long>(best_j + t);
    }
  }
  MeteorAlignment out;
  long prev_h = -2, prev_r = -2;
  for (size_t i = 0; i < nh; ++i) {
    if (link[i] < 0) continue;
    ++out.matches;
    if (static_cast<long>(i) != prev_h + 1 || link[i] != prev_r + 1) ++out.chunks;
    prev_h = static_cast<long>(i);
    prev_r = link[i];
  }
  return out;
}

double meteor_sentence(std::span<const std::string> hypothesis,
                       std::span<const std::string> reference, const MeteorParams& params) {
  const MeteorAlignment a = meteor_align(hypothesis, reference);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(hypothesis.size());
  const double r = m / static_cast<double>(reference.size());
  const double f = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
  const double penalty =
      params.gamma * std::pow(static_cast<double>(a.chunks) / m, params.beta);
  return f * (1.0 - penalty);
}

double meteor(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
              const MeteorParams& params) {
  check_pairs(hypotheses, references);
  std::vector<double> scores;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    scores.push_back(meteor_sentence(hypotheses[i], references[i], params));
  }
  return mean(scores);
}

double transfer_accuracy(std::span<const Tokens> outputs, const RestrictedVocab& vocab) {
  if (outputs.empty()) throw Error(ErrorCode::kInvalidArgument, "no outputs to score");
  size_t clean = 0;
  for (const auto& o : outputs) {
    if (!contains_restricted(vocab, o)) ++clean;
  }
  return 100.0 * static_cast<double>(clean) / static_cast<double>(outputs.size());
}

double avg_perplexity(std::span<const Tokens> outputs, const Scorer& scorer, bool with_end) {
  if (outputs.empty()) throw Error(ErrorCode::kInvalidArgument, "no outputs to score");
  std::vector<double> ppl;
  for (const auto& o : outputs) ppl.push_back(perplexity(scorer, o, with_end));
  return mean(ppl);
}

void EmbeddingTable::add(std::string word, std::vector<double> vec) {
  if (vec.empty()) throw Error(ErrorCode::kParse, "embedding for '" + word + "' is empty");
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw Error(ErrorCode::kParse, "embedding for '" + word + "' has dimension " +
                                       std::to_string(vec.size()) + ", expected " +
                                       std::to_string(dim_));
  }
  table_[std::move(word)] = std::move(vec);
}

EmbeddingTable EmbeddingTable::parse(std::string_view text) {
  EmbeddingTable table;
  std::istringstream in{std::string(text)};
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw Error(ErrorCode::kParse, "embedding line " + std::to_string(line_no) + " has no vector");
    }
    std::vector<double> vec;
    for (size_t i = 1; i < fields.size(); ++i) {
      try {
        size_t used = 0;
        vec.push_back(std::stod(fields[i], &used));
        if (used != fields[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, "embedding line " + std::to_string(line_no) +
                                           ": bad number '" + fields[i] + "'");
      }
    }
    try {
      table.add(fields[0], std::move(vec));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "embedding line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read embeddings " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = table_.find(std::string(word));
  if (it == table_.end()) it = table_.find(to_lower_ascii(word));
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<double> pooled_sentence_vector(std::span<const std::string> tokens,
                                           const EmbeddingTable& table) {
  const size_t d = table.dim();
  std::vector<double> lo(d, 0.0), sum(d, 0.0), hi(d, 0.0);
  bool any = false;
  for (const auto& t : tokens) {
    const auto* v = table.find(t);
    if (!v) continue;
    for (size_t k = 0; k < d; ++k) {
      lo[k] = any ? std::min(lo[k], (*v)[k]) : (*v)[k];
      hi[k] = any ? std::max(hi[k], (*v)[k]) : (*v)[k];
      sum[k] += (*v)[k];
    }
    any = true;
  }
  std::vector<double> out;
  out.reserve(3 * d);
  out.insert(out.end(), lo.begin(), lo.end());
  for (size_t k = 0; k < d; ++k) {
    out.push_back(tokens.empty() ? 0.0 : sum[k] / static_cast<double>(tokens.size()));
  }
  out.insert(out.end(), hi.begin(), hi.end());
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroNorm, "zero-norm sentence vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double fu_content_preservation(std::span<const Tokens> hypotheses, std::span<const Tokens> sources,
                               const EmbeddingTable& table) {
  check_pairs(hypotheses, sources);
  std::vector<double> scores;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    const auto h = pooled_sentence_vector(hypotheses[i], table);
    const auto s = pooled_sentence_vector(sources[i], table);
    try {
      scores.push_back(cosine(h, s));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " in pair " + std::to_string(i));
    }
  }
  return mean(scores);
}

EvalReport evaluate(const EvalInputs& in) {
  if (!in.vocab) throw Error(ErrorCode::kInvalidArgument, "evaluation needs a vocabulary");
  check_pairs(in.outputs, in.sources);
  EvalReport r;
  r.n = in.outputs.size();
  r.bleu = bleu_corpus(in.outputs, in.sources);
  r.rouge = rouge_l(in.outputs, in.sources);
  r.meteor = meteor(in.outputs, in.sources);
  r.accuracy = transfer_accuracy(in.outputs, *in.vocab);
  if (in.embeddings) r.fucp = fu_content_preservation(in.outputs, in.sources, *in.embeddings);
  if (in.scorer) r.avg_ppl = avg_perplexity(in.outputs, *in.scorer);
  return r;
}

std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["bleu"] = r.bleu;
  j["bleu_x100"] = r.bleu * 100.0;
  j["bleu_granularity"] = "corpus";
  j["rouge_l_f1"] = r.rouge;
  j["rouge_l_f1_x100"] = r.rouge * 100.0;
  j["meteor"] = r.meteor;
  j["meteor_x100"] = r.meteor * 100.0;
  j["fucp"] = r.fucp ? nlohmann::ordered_json(*r.fucp) : nlohmann::ordered_json(nullptr);
  j["accuracy"] = r.accuracy;
  j["avg_ppl"] = r.avg_ppl ? nlohmann::ordered_json(*r.avg_ppl) : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

std::string report_tsv_header() { return "BL\tRG\tMT\tFuCP\tAcc\tPPL"; }

std::string report_tsv_row(const EvalReport& r) {
  auto fixed = [](double v, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
  };
  return fixed(r.bleu * 100.0, 1) + "\t" + fixed(r.rouge * 100.0, 1) + "\t" +
         fixed(r.meteor * 100.0, 1) + "\t" + (r.fucp ? fixed(*r.fucp, 3) : "NA") + "\t" +
         fixed(r.accuracy, 1) + "\t" + (r.avg_ppl ? fixed(*r.avg_ppl, 1) : "NA");
}

}  // namespace detox
