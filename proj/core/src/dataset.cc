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

#include "detox/dataset.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "detox/error.h"

namespace detox {

std::string corpus_line(const TaggedSentence& sentence) {
  nlohmann::ordered_json j;
  j["id"] = sentence.base.id;
  j["tokens"] = sentence.base.tokens;
  j["label"] = label_name(sentence.base.label);
  if (!sentence.tags.empty()) {
    std::vector<std::string> tags;
    for (PosTag t : sentence.tags) tags.emplace_back(tag_name(t));
    j["tags"] = tags;
  }
  return j.dump();
}

TaggedSentence parse_corpus_line(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::kParse, "not a JSON object");
  try {
    TaggedSentence s;
    s.base.id = j.at("id").get<std::string>();
    s.base.tokens = j.at("tokens").get<std::vector<std::string>>();
    s.base.label = parse_label(j.at("label").get<std::string>());
    if (j.contains("tags")) {
      for (const auto& name : j["tags"].get<std::vector<std::string>>()) {
        auto tag = parse_tag(name);
        if (!tag) throw Error(ErrorCode::kParse, "unknown POS tag '" + name + "'");
        s.tags.push_back(*tag);
      }
      if (s.tags.size() != s.base.tokens.size()) {
        throw Error(ErrorCode::kParse, "tags and tokens differ in length");
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

void write_corpus(std::ostream& out, std::span<const TaggedSentence> sentences) {
  for (const auto& s : sentences) out << corpus_line(s) << '\n';
}

std::vector<TaggedSentence> read_corpus(std::istream& in) {
  std::vector<TaggedSentence> out;
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse_corpus_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TaggedSentence> read_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read corpus file " + path.string());
  try {
    return read_corpus(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace detox
