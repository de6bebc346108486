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

#include "detox/ngram.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "detox/error.h"

namespace detox {
namespace {

constexpr const char* kFormatName = "detox-ngram";
constexpr size_t kCacheKeep = 16;
constexpr size_t kCacheLimit = 1 << 18;

}  // namespace

size_t NgramModel::KeyHash::operator()(std::span<const WordId> key) const {
  size_t h = 0xcbf29ce484222325ull;
  for (WordId id : key) {
    h ^= id;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

void NgramModel::validate_options() const {
  if (options_.order < 1 || options_.order > 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "n-gram order must be in [1, 5], got " + std::to_string(options_.order));
  }
  if (!(options_.discount > 0.0 && options_.discount < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "discount must be in (0, 1)");
  }
}

NgramModel::WordId NgramModel::intern(const std::string& lowercased) {
  auto [it, inserted] = ids_.emplace(lowercased, static_cast<WordId>(words_.size()));
  if (inserted) words_.push_back(lowercased);
  return it->second;
}

void NgramModel::add_count(std::span<const WordId> context, WordId w, uint32_t count) {
  Level& level = levels_[context.size()];
  auto it = level.find(context);
  if (it == level.end()) {
    it = level.emplace(std::vector<WordId>(context.begin(), context.end()), ContextStats{}).first;
  }
  it->second.total += count;
  it->second.counts[w] += count;
}

NgramModel NgramModel::train(std::span<const Tokens> corpus, NgramOptions options) {
  NgramModel model;
  model.options_ = options;
  model.validate_options();
  model.words_ = {std::string(kBosToken), std::string(kEosToken), std::string(kUnkToken)};
  for (WordId i = 0; i < model.words_.size(); ++i) model.ids_[model.words_[i]] = i;
  model.levels_.resize(static_cast<size_t>(options.order));

  const size_t pad = static_cast<size_t>(options.order - 1);
  size_t events = 0;
  std::vector<WordId> ids;
  for (const auto& sentence : corpus) {
    if (sentence.empty()) continue;
    ids.assign(pad, kBos);
    for (const auto& tok : sentence) ids.push_back(model.intern(to_lower_ascii(tok)));
    if (options.end_event) ids.push_back(kEos);
    for (size_t i = pad; i < ids.size(); ++i) {
      for (size_t m = 0; m <= pad; ++m) {
        model.add_count(std::span<const WordId>(ids).subspan(i - m, m), ids[i], 1);
      }
      ++events;
    }
  }
  if (events == 0) throw Error(ErrorCode::kInvalidArgument, "cannot train on an empty corpus");
  return model;
}

size_t NgramModel::predictable_count() const {
  return (words_.size() - 3) + (options_.end_event ? 1 : 0) + (options_.open_vocab ? 1 : 0);
}

std::optional<NgramModel::WordId> NgramModel::find_id(std::string_view lowercased) const {
  auto it = ids_.find(std::string(lowercased));
  if (it == ids_.end() || it->second == kBos) return std::nullopt;
  return it->second;
}

NgramModel::WordId NgramModel::id_or_unk(std::string_view token) const {
  auto id = find_id(to_lower_ascii(token));
  if (id && *id != kEos && *id != kUnk) return *id;
  if (!options_.open_vocab) {
    throw Error(ErrorCode::kInvalidToken,
                "word '" + std::string(token) + "' is outside a closed vocabulary");
  }
  return kUnk;
}

std::vector<NgramModel::WordId> NgramModel::history_ids(
    std::span<const std::string> history) const {
  const size_t need = static_cast<size_t>(options_.order - 1);
  std::vector<WordId> out;
  const size_t have = std::min(need, history.size());
  out.assign(need - have, kBos);
  for (size_t i = history.size() - have; i < history.size(); ++i) {
    out.push_back(id_or_unk(history[i]));
  }
  return out;
}

double NgramModel::prob_ids(std::span<const WordId> history, WordId w) const {
  double p = 1.0 / static_cast<double>(predictable_count());
  const size_t max_m = std::min(history.size(), static_cast<size_t>(options_.order - 1));
  const double d = options_.discount;
  for (size_t m = 0; m <= max_m; ++m) {
    const auto& level = levels_[m];
    auto it = level.find(history.subspan(history.size() - m, m));
    if (it == level.end()) break;
    const ContextStats& st = it->second;
    const double total = static_cast<double>(st.total);
    auto c = st.counts.find(w);
    const double seen = c == st.counts.end() ? 0.0 : std::max(c->second - d, 0.0);
    p = seen / total + d * static_cast<double>(st.counts.size()) / total * p;
  }
  return p;
}

double NgramModel::prob(std::span<const std::string> history, std::string_view word) const {
  return prob_ids(history_ids(history), id_or_unk(word));
}

double NgramModel::end_prob(std::span<const std::string> history) const {
  if (!options_.end_event) return 0.0;
  return prob_ids(history_ids(history), kEos);
}

SequenceLogProb NgramModel::log_prob(std::span<const std::string> tokens, bool with_end) const {
  if (with_end && !options_.end_event) {
    throw Error(ErrorCode::kInvalidArgument, "model was trained without an end event");
  }
  const size_t pad = static_cast<size_t>(options_.order - 1);
  std::vector<WordId> ids(pad, kBos);
  for (const auto& t : tokens) ids.push_back(id_or_unk(t));
  if (with_end) ids.push_back(kEos);
  SequenceLogProb out;
  for (size_t i = pad; i < ids.size(); ++i) {
    out.log_prob += std::log(prob_ids(std::span<const WordId>(ids).subspan(i - pad, pad), ids[i]));
    ++out.events;
  }
  return out;
}

std::vector<std::string> NgramModel::ranked_vocabulary(size_t limit) const {
  const auto& unigrams = levels_[0].begin()->second.counts;
  std::vector<std::pair<uint32_t, WordId>> ranked;
  for (auto [id, count] : unigrams) {
    if (id > kUnk) ranked.emplace_back(count, id);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return words_[a.second] < words_[b.second];
  });
  if (limit != 0 && ranked.size() > limit) ranked.resize(limit);
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(words_[r.second]);
  return out;
}

void NgramModel::save(std::ostream& out) const {
  nlohmann::ordered_json header;
  header["format"] = kFormatName;
  header["version"] = kNgramFormatVersion;
  header["order"] = options_.order;
  header["discount"] = options_.discount;
  header["end_event"] = options_.end_event;
  header["open_vocab"] = options_.open_vocab;
  out << header.dump() << '\n';

  using Record = std::tuple<size_t, std::vector<std::string>, std::string, uint32_t>;
  std::vector<Record> records;
  for (size_t m = 0; m < levels_.size(); ++m) {
    for (const auto& [context, stats] : levels_[m]) {
      std::vector<std::string> ctx;
      for (WordId id : context) ctx.push_back(words_[id]);
      for (auto [w, c] : stats.counts) records.emplace_back(m, ctx, words_[w], c);
    }
  }
  std::sort(records.begin(), records.end());
  for (const auto& [m, ctx, w, c] : records) {
    nlohmann::ordered_json j;
    j["context"] = ctx;
    j["word"] = w;
    j["count"] = c;
    out << j.dump() << '\n';
  }
}

void NgramModel::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write language model " + path.string());
  save(out);
}

NgramModel NgramModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "language model file is empty");
  auto header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() || header.value("format", "") != kFormatName) {
    throw Error(ErrorCode::kParse, "not an n-gram model file");
  }
  if (header.value("version", -1) != kNgramFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "unsupported n-gram model version");
  }
  NgramModel model;
  try {
    model.options_.order = header.at("order").get<int>();
    model.options_.discount = header.at("discount").get<double>();
    model.options_.end_event = header.at("end_event").get<bool>();
    model.options_.open_vocab = header.at("open_vocab").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("n-gram header: ") + e.what());
  }
  model.validate_options();
  model.words_ = {std::string(kBosToken), std::string(kEosToken), std::string(kUnkToken)};
  for (WordId i = 0; i < model.words_.size(); ++i) model.ids_[model.words_[i]] = i;
  model.levels_.resize(static_cast<size_t>(model.options_.order));

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "n-gram model line " + std::to_string(line_no);
    auto j = nlohmann::json::parse(line, nullptr, false);
    std::vector<std::string> ctx;
    std::string w;
    uint32_t count = 0;
    try {
      if (j.is_discarded()) throw Error(ErrorCode::kParse, "invalid JSON");
      ctx = j.at("context").get<std::vector<std::string>>();
      w = j.at("word").get<std::string>();
      count = j.at("count").get<uint32_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    if (ctx.size() >= model.levels_.size() || count == 0 || w == kBosToken) {
      throw Error(ErrorCode::kParse, where + ": record does not fit the model order");
    }
    std::vector<WordId> key;
    for (const auto& c : ctx) key.push_back(model.intern(c));
    model.add_count(key, model.intern(w), count);
  }
  if (model.levels_[0].empty()) throw Error(ErrorCode::kParse, "n-gram model has no unigrams");
  return model;
}

NgramModel NgramModel::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read language model " + path.string());
  try {
    return load(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

NgramFiller::NgramFiller(std::shared_ptr<const NgramModel> model, size_t pool_size)
    : model_(std::move(model)) {
  if (!model_) throw Error(ErrorCode::kInvalidArgument, "NgramFiller needs a model");
  for (const auto& w : model_->ranked_vocabulary(pool_size)) {
    pool_.push_back(*model_->find_id(w));
  }
}

std::vector<NgramModel::WordId> NgramFiller::ranked_for(
    std::span<const NgramModel::WordId> history, std::optional<NgramModel::WordId> right,
    size_t keep) const {
  std::vector<std::pair<double, size_t>> scored;
  scored.reserve(pool_.size());
  std::vector<NgramModel::WordId> next_history(history.begin(), history.end());
  for (size_t rank = 0; rank < pool_.size(); ++rank) {
    const auto w = pool_[rank];
    double s = model_->prob_ids(history, w);
    if (right) {
      if (!next_history.empty()) {
        std::copy(history.begin() + 1, history.end(), next_history.begin());
        next_history.back() = w;
      }
      s *= model_->prob_ids(next_history, *right);
    }
    scored.emplace_back(s, rank);
  }
  const auto better = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  keep = std::min(keep, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), better);
  std::vector<NgramModel::WordId> out;
  for (size_t i = 0; i < keep; ++i) out.push_back(pool_[scored[i].second]);
  return out;
}

std::vector<std::string> NgramFiller::fill(std::span<const std::string> /*context*/,
                                           std::span<const Slot> slots,
                                           const FillConstraint& constraint) const {
  const size_t order = static_cast<size_t>(model_->options().order);
  std::vector<std::string> out;
  out.reserve(slots.size());
  std::vector<NgramModel::WordId> ids(order - 1, NgramModel::kBos);
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.push_back(*slots[i]);
      ids.push_back(model_->id_or_unk(*slots[i]));
      continue;
    }
    const std::span<const NgramModel::WordId> history =
        std::span<const NgramModel::WordId>(ids).last(order - 1);
    std::optional<NgramModel::WordId> right;
    if (i + 1 < slots.size()) {
      if (slots[i + 1]) right = model_->id_or_unk(*slots[i + 1]);
    } else if (model_->options().end_event) {
      right = NgramModel::kEos;
    }

    std::string key;
    for (auto id : history) key.append(reinterpret_cast<const char*>(&id), sizeof id);
    const NgramModel::WordId r = right.value_or(std::numeric_limits<NgramModel::WordId>::max());
    key.append(reinterpret_cast<const char*>(&r), sizeof r);

    std::vector<NgramModel::WordId> ranked;
    {
      std::shared_lock lock(cache_mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) ranked = it->second;
    }
    if (ranked.empty()) {
      ranked = ranked_for(history, right, kCacheKeep);
      std::unique_lock lock(cache_mutex_);
      if (cache_.size() >= kCacheLimit) cache_.clear();
      cache_.emplace(key, ranked);
    }

    std::optional<NgramModel::WordId> choice;
    for (auto w : ranked) {
      if (constraint.allows(model_->word(w))) {
        choice = w;
        break;
      }
    }
    if (!choice) {
      for (auto w : ranked_for(history, right, pool_.size())) {
        if (constraint.allows(model_->word(w))) {
          choice = w;
          break;
        }
      }
    }
    if (!choice) {
      throw Error(ErrorCode::kCandidatePoolEmpty, "every candidate-pool word is excluded");
    }
    out.push_back(model_->word(*choice));
    ids.push_back(*choice);
  }
  return out;
}

}  // namespace detox
