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

#include "detox/lm.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "detox/error.h"
#include "http_client.h"

namespace detox {

double perplexity(const Scorer& scorer, std::span<const std::string> tokens, bool with_end) {
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "perplexity of an empty sentence");
  const SequenceLogProb lp = scorer.log_prob(tokens, with_end);
  if (lp.events == 0) throw Error(ErrorCode::kLogic, "scorer reported zero events");
  return std::exp(-lp.log_prob / static_cast<double>(lp.events));
}

std::vector<Slot> slots_from_strings(std::span<const std::string> words) {
  std::vector<Slot> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    if (w == kMaskToken) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(w);
    }
  }
  return out;
}

std::string slot_string(const Slot& slot) { return slot ? *slot : std::string(kMaskToken); }

FillConstraint::FillConstraint(const RestrictedVocab& restricted)
    : restricted_(&restricted),
      special_{std::string(kMaskToken), std::string(kSepToken), std::string(kBosToken),
               std::string(kEosToken), std::string(kUnkToken)} {}

bool FillConstraint::allows(std::string_view word) const {
  if (word.empty()) return false;
  if (special_.contains(std::string(word))) return false;
  return !is_restricted(*restricted_, word);
}

std::vector<std::string> fill_slots(std::span<const std::string> context,
                                    std::span<const Slot> slots, const FillConstraint& constraint,
                                    const MaskFiller& filler) {
  if (slots.empty()) throw Error(ErrorCode::kInvalidArgument, "no slots to fill");
  const bool any_mask = std::any_of(slots.begin(), slots.end(), [](const Slot& s) { return !s; });
  if (!any_mask) {
    std::vector<std::string> out;
    for (const auto& s : slots) out.push_back(*s);
    return out;
  }
  std::vector<std::string> out = filler.fill(context, slots, constraint);
  if (out.size() != slots.size()) {
    throw Error(ErrorCode::kLengthMismatch, "filler returned " + std::to_string(out.size()) +
                                                " tokens for " + std::to_string(slots.size()) +
                                                " slots");
  }
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      if (out[i] != *slots[i]) {
        throw Error(ErrorCode::kRemoteProtocol,
                    "filler altered fixed slot " + std::to_string(i) + " ('" + *slots[i] + "')");
      }
    } else if (!constraint.allows(out[i])) {
      throw Error(ErrorCode::kRemoteProtocol,
                  "filler produced excluded word '" + out[i] + "' at slot " + std::to_string(i));
    }
  }
  return out;
}

RemoteFiller::RemoteFiller(RemoteEndpoint endpoint)
    : client_(std::make_unique<internal::JsonClient>(std::move(endpoint))) {}
RemoteFiller::~RemoteFiller() = default;

std::vector<std::string> RemoteFiller::fill(std::span<const std::string> context,
                                            std::span<const Slot> slots,
                                            const FillConstraint& constraint) const {
  std::vector<std::string> slot_words;
  for (const auto& s : slots) slot_words.push_back(slot_string(s));
  nlohmann::json body = {
      {"context", std::vector<std::string>(context.begin(), context.end())},
      {"slots", slot_words},
      {"restricted", constraint.restricted().sorted_terms()},
  };
  nlohmann::json res = client_->post("/fill", body);
  if (!res.contains("tokens") || !res["tokens"].is_array()) {
    throw Error(ErrorCode::kRemoteProtocol, "/fill response lacks a \"tokens\" array");
  }
  std::vector<std::string> out;
  for (const auto& t : res["tokens"]) {
    if (!t.is_string()) throw Error(ErrorCode::kRemoteProtocol, "/fill returned a non-string token");
    out.push_back(t.get<std::string>());
  }
  return out;
}

RemoteScorer::RemoteScorer(RemoteEndpoint endpoint)
    : client_(std::make_unique<internal::JsonClient>(std::move(endpoint))) {}
RemoteScorer::~RemoteScorer() = default;

SequenceLogProb RemoteScorer::log_prob(std::span<const std::string> tokens, bool with_end) const {
  nlohmann::json body = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                         {"end_event", with_end}};
  nlohmann::json res = client_->post("/ppl", body);
  if (!res.contains("log_prob") || !res["log_prob"].is_number() || !res.contains("events") ||
      !res["events"].is_number_unsigned()) {
    throw Error(ErrorCode::kRemoteProtocol, "/ppl response lacks log_prob/events");
  }
  SequenceLogProb out{res["log_prob"].get<double>(), res["events"].get<size_t>()};
  if (!std::isfinite(out.log_prob) || out.log_prob > 0.0 || out.events == 0) {
    throw Error(ErrorCode::kRemoteProtocol, "/ppl returned an invalid log probability");
  }
  return out;
}

}  // namespace detox
