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

#include "detox/retrieve.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "detox/error.h"

namespace detox {
namespace {

constexpr const char* kFormatName = "detox-pos-index";
constexpr const char* kTermScheme = "pos-unigram+bigram/sqrt-tf/smoothed-idf";

TermId unigram_term(PosTag t) { return static_cast<TermId>(t); }
TermId bigram_term(PosTag a, PosTag b) {
  return static_cast<TermId>(kUniversalTagCount + static_cast<size_t>(a) * kUniversalTagCount +
                             static_cast<size_t>(b));
}

std::optional<TermId> parse_term(std::string_view name) {
  const size_t space = name.find(' ');
  if (space == std::string_view::npos) {
    auto t = parse_tag(name);
    if (!t || *t == PosTag::kBw) return std::nullopt;
    return unigram_term(*t);
  }
  auto a = parse_tag(name.substr(0, space));
  auto b = parse_tag(name.substr(space + 1));
  if (!a || !b || *a == PosTag::kBw || *b == PosTag::kBw) return std::nullopt;
  return bigram_term(*a, *b);
}

double idf_for(size_t doc_count, size_t df) {
  return 1.0 + std::log(static_cast<double>(doc_count) / static_cast<double>(df + 1));
}

}  // namespace

std::string term_name(TermId term) {
  if (term < kUniversalTagCount) return std::string(tag_name(static_cast<PosTag>(term)));
  const size_t pair = term - kUniversalTagCount;
  return std::string(tag_name(static_cast<PosTag>(pair / kUniversalTagCount))) + " " +
         std::string(tag_name(static_cast<PosTag>(pair % kUniversalTagCount)));
}

std::vector<std::pair<TermId, uint32_t>> extract_terms(std::span<const PosTag> tags) {
  std::map<TermId, uint32_t> counts;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == PosTag::kBw) continue;
    ++counts[unigram_term(tags[i])];
    if (i + 1 < tags.size() && tags[i + 1] != PosTag::kBw) {
      ++counts[bigram_term(tags[i], tags[i + 1])];
    }
  }
  return {counts.begin(), counts.end()};
}

size_t PosIndex::SeqHash::operator()(const PosSequence& s) const {
  size_t h = 1469598103934665603ull;
  for (PosTag t : s.tags()) {
    h ^= static_cast<size_t>(t) + 1;
    h *= 1099511628211ull;
  }
  return h;
}

PosIndex PosIndex::build(std::span<const PosSequence> sequences) {
  if (sequences.empty()) throw Error(ErrorCode::kEmptyIndex, "no sequences to index");
  std::vector<PosSequence> docs;
  std::vector<uint32_t> multiplicity;
  std::unordered_map<PosSequence, size_t, SeqHash> seen;
  for (const auto& seq : sequences) {
    if (seq.contains(PosTag::kBw)) {
      throw Error(ErrorCode::kCorruptCorpus,
                  "BW tag in a sequence meant for the clean index: " + to_string(seq));
    }
    auto [it, inserted] = seen.emplace(seq, docs.size());
    if (inserted) {
      docs.push_back(seq);
      multiplicity.push_back(1);
    } else {
      ++multiplicity[it->second];
    }
  }
  return from_unique(std::move(docs), std::move(multiplicity));
}

PosIndex PosIndex::from_unique(std::vector<PosSequence> docs, std::vector<uint32_t> multiplicity) {
  PosIndex index;
  index.docs_ = std::move(docs);
  index.multiplicity_ = std::move(multiplicity);
  index.postings_.assign(kTermCount, {});
  for (size_t d = 0; d < index.docs_.size(); ++d) {
    for (auto [term, count] : extract_terms(index.docs_[d].tags())) {
      index.postings_[term].push_back(Posting{static_cast<uint32_t>(d), count, 0.0});
    }
    index.lookup_.emplace(index.docs_[d], d);
  }
  const size_t n = index.docs_.size();
  index.idf_.resize(kTermCount);
  for (size_t t = 0; t < kTermCount; ++t) index.idf_[t] = idf_for(n, index.postings_[t].size());

  index.norms_.assign(n, 0.0);
  for (size_t t = 0; t < kTermCount; ++t) {
    for (auto& p : index.postings_[t]) {
      const double w = std::sqrt(static_cast<double>(p.count)) * index.idf_[t];
      p.weight = w;
      index.norms_[p.doc] += w * w;
    }
  }
  for (auto& norm : index.norms_) norm = std::sqrt(norm);
  for (auto& list : index.postings_) {
    for (auto& p : list) p.weight /= index.norms_[p.doc];
  }
  return index;
}

std::optional<size_t> PosIndex::find(const PosSequence& seq) const {
  auto it = lookup_.find(seq);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<TermId, double>> PosIndex::query_vector(const PosSequence& query,
                                                              double* norm) const {
  std::vector<std::pair<TermId, double>> out;
  double sq = 0.0;
  for (auto [term, count] : extract_terms(query.tags())) {
    const double w = std::sqrt(static_cast<double>(count)) * idf_[term];
    out.emplace_back(term, w);
    sq += w * w;
  }
  *norm = std::sqrt(sq);
  return out;
}

double PosIndex::score(const PosSequence& query, size_t doc_id) const {
  if (doc_id >= docs_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "doc id " + std::to_string(doc_id) + " out of range");
  }
  double qnorm = 0.0;
  auto qvec = query_vector(query, &qnorm);
  if (qnorm == 0.0) return 0.0;
  double dot = 0.0;
  for (auto [term, qw] : qvec) {
    const auto& list = postings_[term];
    auto it = std::lower_bound(list.begin(), list.end(), doc_id,
                               [](const Posting& p, size_t d) { return p.doc < d; });
    if (it != list.end() && it->doc == doc_id) dot += qw * it->weight;
  }
  return dot / qnorm;
}

std::vector<RetrievalHit> PosIndex::query_similar(const PosSequence& query, size_t k,
                                                  bool exclude_exact) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (docs_.empty()) throw Error(ErrorCode::kEmptyIndex, "index has no documents");

  double qnorm = 0.0;
  auto qvec = query_vector(query, &qnorm);
  std::vector<double> acc(docs_.size(), 0.0);
  if (qnorm > 0.0) {
    for (auto [term, qw] : qvec) {
      for (const auto& p : postings_[term]) acc[p.doc] += qw * p.weight;
    }
    for (auto& a : acc) a /= qnorm;
  }

  const std::optional<size_t> exact = find(query);
  std::vector<uint32_t> order;
  order.reserve(docs_.size());
  for (size_t d = 0; d < docs_.size(); ++d) {
    if (exclude_exact && exact && *exact == d) continue;
    order.push_back(static_cast<uint32_t>(d));
  }
  const auto len_diff = [&](uint32_t d) {
    const size_t a = docs_[d].size(), b = query.size();
    return a > b ? a - b : b - a;
  };
  // Scores that differ only by rounding noise compare equal, so ties fall to
  // the length and id rules regardless of summation order.
  std::vector<long long> key(acc.size());
  for (size_t d = 0; d < acc.size(); ++d) key[d] = std::llround(acc[d] * kScoreResolution);
  const auto better = [&](uint32_t a, uint32_t b) {
    if (key[a] != key[b]) return key[a] > key[b];
    const size_t la = len_diff(a), lb = len_diff(b);
    if (la != lb) return la < lb;
    return a < b;
  };
  const size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    better);

  std::vector<RetrievalHit> hits;
  hits.reserve(take);
  for (size_t i = 0; i < take; ++i) {
    const uint32_t d = order[i];
    hits.push_back(RetrievalHit{d, docs_[d], acc[d], exact && *exact == d});
  }
  return hits;
}

void PosIndex::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  {
    nlohmann::ordered_json manifest;
    manifest["format"] = kFormatName;
    manifest["version"] = kIndexFormatVersion;
    manifest["term_scheme"] = kTermScheme;
    manifest["doc_count"] = docs_.size();
    manifest["multiplicity"] = multiplicity_;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "postings.jsonl", std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / "postings.jsonl").string());
    for (size_t t = 0; t < kTermCount; ++t) {
      if (postings_[t].empty()) continue;
      nlohmann::ordered_json line;
      line["term"] = term_name(static_cast<TermId>(t));
      nlohmann::json list = nlohmann::json::array();
      for (const auto& p : postings_[t]) list.push_back({p.doc, p.count});
      line["postings"] = std::move(list);
      out << line.dump() << '\n';
    }
  }
  {
    std::ofstream out(dir / "documents.jsonl", std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / "documents.jsonl").string());
    for (const auto& d : docs_) {
      nlohmann::json tags = nlohmann::json::array();
      for (PosTag t : d.tags()) tags.push_back(tag_name(t));
      out << tags.dump() << '\n';
    }
  }
}

PosIndex PosIndex::load(const std::filesystem::path& dir) {
  auto open = [&](const char* name) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + (dir / name).string());
    return in;
  };

  nlohmann::json manifest;
  {
    auto in = open("manifest.json");
    manifest = nlohmann::json::parse(in, nullptr, false);
  }
  if (manifest.is_discarded() || !manifest.is_object() ||
      manifest.value("format", "") != kFormatName) {
    throw Error(ErrorCode::kParse, (dir / "manifest.json").string() + " is not a POS index manifest");
  }
  if (!manifest.contains("version") || !manifest["version"].is_number_integer() ||
      manifest["version"].get<int>() != kIndexFormatVersion ||
      manifest.value("term_scheme", "") != kTermScheme) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported index version/term scheme in " + (dir / "manifest.json").string());
  }

  std::vector<PosSequence> docs;
  {
    auto in = open("documents.jsonl");
    size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      std::vector<PosTag> tags;
      bool ok = j.is_array() && !j.empty();
      if (ok) {
        for (const auto& name : j) {
          auto tag = name.is_string() ? parse_tag(name.get<std::string>()) : std::nullopt;
          if (!tag) {
            ok = false;
            break;
          }
          tags.push_back(*tag);
        }
      }
      if (!ok) {
        throw Error(ErrorCode::kParse,
                    "documents.jsonl line " + std::to_string(line_no) + ": bad tag array");
      }
      docs.emplace_back(std::move(tags));
    }
  }
  const size_t doc_count = manifest.value("doc_count", size_t{0});
  std::vector<uint32_t> multiplicity =
      manifest.value("multiplicity", std::vector<uint32_t>(docs.size(), 1));
  if (docs.size() != doc_count || multiplicity.size() != doc_count) {
    throw Error(ErrorCode::kCorruptCorpus, "index document count disagrees with manifest");
  }
  if (docs.empty()) throw Error(ErrorCode::kEmptyIndex, "index has no documents");

  // Rebuild derived structures from the documents, then require the stored
  // postings to agree exactly.
  {
    std::unordered_map<PosSequence, size_t, SeqHash> seen;
    for (size_t d = 0; d < docs.size(); ++d) {
      if (docs[d].contains(PosTag::kBw) || !seen.emplace(docs[d], d).second) {
        throw Error(ErrorCode::kCorruptCorpus, "documents.jsonl holds a BW tag or a duplicate");
      }
    }
  }
  PosIndex index = from_unique(std::move(docs), std::move(multiplicity));
  std::vector<bool> covered(kTermCount, false);
  auto in = open("postings.jsonl");
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "postings.jsonl line " + std::to_string(line_no);
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("term") || !j["term"].is_string() ||
        !j.contains("postings") || !j["postings"].is_array()) {
      throw Error(ErrorCode::kParse, where + ": malformed record");
    }
    auto term = parse_term(j["term"].get<std::string>());
    if (!term || covered[*term]) throw Error(ErrorCode::kParse, where + ": bad or repeated term");
    covered[*term] = true;
    const auto& expected = index.postings_[*term];
    const auto& got = j["postings"];
    bool same = got.size() == expected.size();
    for (size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].is_array() && got[i].size() == 2 && got[i][0] == expected[i].doc &&
             got[i][1] == expected[i].count;
    }
    if (!same) throw Error(ErrorCode::kCorruptCorpus, where + ": postings disagree with documents");
  }
  for (size_t t = 0; t < kTermCount; ++t) {
    if (!covered[t] && !index.postings_[t].empty()) {
      throw Error(ErrorCode::kCorruptCorpus, "postings.jsonl lacks term '" +
                                                 term_name(static_cast<TermId>(t)) + "'");
    }
  }
  return index;
}

}  // namespace detox
