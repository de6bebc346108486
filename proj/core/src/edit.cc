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

#include "detox/edit.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "detox/parallel.h"
#include "detox/rng.h"
#include "http_client.h"

namespace detox {

std::string_view editor_mode_name(EditorMode mode) {
  return mode == EditorMode::kIdentity ? "identity" : "remote";
}

EditorMode parse_editor_mode(std::string_view name) {
  if (name == "identity") return EditorMode::kIdentity;
  if (name == "remote") return EditorMode::kRemote;
  throw Error(ErrorCode::kInvalidArgument, "unknown editor mode '" + std::string(name) + "'");
}

RemoteEditor::RemoteEditor(RemoteEndpoint endpoint, int beam_size, size_t max_len)
    : client_(std::make_unique<internal::JsonClient>(std::move(endpoint))),
      beam_size_(beam_size),
      max_len_(max_len) {
  if (beam_size < 1) throw Error(ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  if (max_len < 1) throw Error(ErrorCode::kInvalidArgument, "max_len must be >= 1");
}

RemoteEditor::~RemoteEditor() = default;

Tokens RemoteEditor::edit(std::span<const std::string> tokens) const {
  nlohmann::json body = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                         {"beam_size", beam_size_},
                         {"max_len", max_len_}};
  nlohmann::json res = client_->post("/edit", body);
  const auto it = res.find("tokens");
  if (it == res.end() || !it->is_array()) {
    throw Error(ErrorCode::kRemoteProtocol, "/edit response lacks a tokens array");
  }
  Tokens out;
  for (const auto& t : *it) {
    if (!t.is_string() || t.get_ref<const std::string&>().empty()) {
      throw Error(ErrorCode::kRemoteProtocol, "/edit returned a non-string or empty token");
    }
    out.push_back(t.get<std::string>());
  }
  if (out.empty() || out.size() > max_len_) {
    throw Error(ErrorCode::kRemoteProtocol, "/edit returned " + std::to_string(out.size()) +
                                                " tokens, expected 1.." + std::to_string(max_len_));
  }
  return out;
}

std::unique_ptr<Editor> make_editor(const EditorConfig& config) {
  if (config.mode == EditorMode::kIdentity) return std::make_unique<IdentityEditor>();
  if (!config.endpoint || config.endpoint->url.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote editor requires an endpoint");
  }
  return std::make_unique<RemoteEditor>(*config.endpoint, config.beam_size, config.max_len);
}

std::vector<Tokens> edit_candidates(std::span<const Tokens> candidates, const Editor& editor) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "no candidates to edit");
  std::vector<Tokens> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    try {
      out.push_back(editor.edit(c));
    } catch (const Error& e) {
      throw EditError(e.code(),
                      std::string(e.what()) + " (edited " + std::to_string(out.size()) + " of " +
                          std::to_string(candidates.size()) + " candidates)",
                      out.size());
    }
  }
  return out;
}

std::vector<EditPair> synthesize_edit_corpus(std::span<const LabeledSentence> corpus,
                                             size_t sample_n, uint64_t seed,
                                             const SynthesisHandles& h, SynthesisStats* stats) {
  if (!h.tagger || !h.index || !h.filler || !h.vocab) {
    throw Error(ErrorCode::kInvalidArgument, "synthesis handles are incomplete");
  }
  if (corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "edit corpus source is empty");
  std::vector<size_t> english;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label != Label::kNonOffensive) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sentence " + corpus[i].id + " is not labeled non-offensive");
    }
    if (is_mostly_english(corpus[i].tokens)) english.push_back(i);
  }
  if (english.empty()) throw Error(ErrorCode::kInvalidArgument, "no English sentences to sample");

  Rng rng(seed);
  const auto picks = sample_indices(english.size(), std::min(sample_n, english.size()), rng);

  std::vector<std::vector<EditPair>> per_sentence(picks.size());
  std::vector<size_t> dropped(picks.size(), 0);
  parallel_for(picks.size(), h.jobs, [&](size_t p) {
    const LabeledSentence& s = corpus[english[picks[p]]];
    TaggedSentence tagged = tag_and_mark(s, *h.tagger, *h.vocab);
    const PosSequence query(tagged.tags);
    std::vector<PosSequence> templates;
    for (auto& hit : h.index->query_similar(query, h.k, /*exclude_exact=*/true)) {
      templates.push_back(std::move(hit.sequence));
    }
    Generation gen = generate_candidates(tagged, templates, *h.filler, *h.vocab, h.caps);
    for (auto& c : gen.candidates) {
      if (c == s.tokens) {
        ++dropped[p];
        continue;
      }
      per_sentence[p].push_back({std::move(c), s.tokens});
    }
  });

  std::vector<EditPair> pairs;
  size_t total_dropped = 0;
  for (size_t p = 0; p < picks.size(); ++p) {
    total_dropped += dropped[p];
    for (auto& pair : per_sentence[p]) pairs.push_back(std::move(pair));
  }
  if (stats) {
    stats->corpus_size = corpus.size();
    stats->english = english.size();
    stats->sampled = picks.size();
    stats->pairs = pairs.size();
    stats->identical_dropped = total_dropped;
  }
  return pairs;
}

namespace {

void check_tsv_token(const std::string& t) {
  if (t.empty() || t.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidToken, "token '" + t + "' cannot be written to a pairs file");
  }
}

}  // namespace

void write_edit_pairs(std::ostream& out, std::span<const EditPair> pairs) {
  for (const auto& p : pairs) {
    for (const auto& t : p.source) check_tsv_token(t);
    for (const auto& t : p.target) check_tsv_token(t);
    out << join(p.source, " ") << '\t' << join(p.target, " ") << '\n';
  }
}

std::vector<EditPair> read_edit_pairs(std::istream& in) {
  std::vector<EditPair> pairs;
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::kParse, "pairs line " + std::to_string(line_no) +
                                         ": expected exactly one TAB");
    }
    EditPair p{split_whitespace(std::string_view(line).substr(0, tab)),
               split_whitespace(std::string_view(line).substr(tab + 1))};
    if (p.source.empty() || p.target.empty()) {
      throw Error(ErrorCode::kParse, "pairs line " + std::to_string(line_no) + ": empty side");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void write_edit_pairs_file(const std::filesystem::path& path, std::span<const EditPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_edit_pairs(out, pairs);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::vector<EditPair> read_edit_pairs_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return read_edit_pairs(in);
}

}  // namespace detox
