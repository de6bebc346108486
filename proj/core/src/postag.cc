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

#include "detox/postag.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "detox/error.h"
#include "detox/log.h"
#include "http_client.h"

namespace detox {

PosSequence::PosSequence(std::vector<PosTag> tags) : tags_(std::move(tags)) {
  if (tags_.empty()) throw Error(ErrorCode::kInvalidArgument, "POS sequence is empty");
}

bool PosSequence::contains(PosTag tag) const {
  return std::find(tags_.begin(), tags_.end(), tag) != tags_.end();
}

std::string to_string(const PosSequence& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += tag_name(seq[i]);
  }
  return out;
}

std::vector<PosTag> tag_sentence(std::span<const std::string> tokens, const Tagger& tagger) {
  if (tokens.empty()) throw Error(ErrorCode::kInvalidToken, "cannot tag an empty sentence");
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) {
      throw Error(ErrorCode::kInvalidToken, "token " + std::to_string(i) + " is empty");
    }
  }
  std::vector<PosTag> tags = tagger.tag(tokens);
  if (tags.size() != tokens.size()) {
    throw Error(ErrorCode::kLengthMismatch, "tagger returned " + std::to_string(tags.size()) +
                                                " tags for " + std::to_string(tokens.size()) +
                                                " tokens");
  }
  return tags;
}

PosSequence substitute_bw(const TaggedSentence& tagged, const RestrictedVocab& vocab) {
  const Tokens& tokens = tagged.tokens();
  if (tagged.tags.size() != tokens.size()) {
    throw Error(ErrorCode::kLengthMismatch, "sentence '" + tagged.base.id + "' has " +
                                                std::to_string(tagged.tags.size()) + " tags for " +
                                                std::to_string(tokens.size()) + " tokens");
  }
  std::vector<PosTag> out = tagged.tags;
  for (size_t j = 0; j < tokens.size(); ++j) {
    if (is_restricted(vocab, tokens[j])) {
      out[j] = PosTag::kBw;
    } else if (out[j] == PosTag::kBw) {
      // A stale sentinel on a clean token; kBw is only valid for restricted words.
      out[j] = PosTag::kX;
    }
  }
  return PosSequence(std::move(out));
}

TaggedSentence tag_and_mark(LabeledSentence sentence, const Tagger& tagger,
                            const RestrictedVocab& vocab) {
  TaggedSentence tagged{std::move(sentence), {}};
  tagged.tags = tag_sentence(tagged.base.tokens, tagger);
  tagged.tags = substitute_bw(tagged, vocab).tags();
  return tagged;
}

RemoteTagger::RemoteTagger(RemoteEndpoint endpoint)
    : client_(std::make_unique<internal::JsonClient>(std::move(endpoint))) {}

RemoteTagger::~RemoteTagger() = default;

std::vector<PosTag> RemoteTagger::tag(std::span<const std::string> tokens) const {
  nlohmann::json body = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}};
  nlohmann::json res = client_->post("/tag", body);
  if (!res.contains("tags") || !res["tags"].is_array()) {
    throw Error(ErrorCode::kRemoteProtocol, "/tag response lacks a \"tags\" array");
  }
  std::vector<PosTag> tags;
  for (const auto& t : res["tags"]) {
    if (!t.is_string()) throw Error(ErrorCode::kRemoteProtocol, "/tag returned a non-string tag");
    auto parsed = parse_tag(t.get<std::string>());
    if (!parsed || *parsed == PosTag::kBw) {
      emit_log_line(nlohmann::json{{"event", "unknown_tag"},
                                   {"tag", t.get<std::string>()},
                                   {"mapped_to", "X"}}
                        .dump());
      parsed = PosTag::kX;
    }
    tags.push_back(*parsed);
  }
  return tags;
}

}  // namespace detox
