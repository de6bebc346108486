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

#ifndef DETOX_DATASET_H_
#define DETOX_DATASET_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "detox/postag.h"

namespace detox {

// Corpus file: one JSON object per line,
//   {"id": string, "tokens": [string], "label": "offensive"|"non-offensive",
//    "tags": [string]}
// "tags" is omitted for untagged sentences (TaggedSentence::tags empty).
std::string corpus_line(const TaggedSentence& sentence);
TaggedSentence parse_corpus_line(std::string_view line);

void write_corpus(std::ostream& out, std::span<const TaggedSentence> sentences);
// Blank lines are skipped. Errors name the 1-based line number.
std::vector<TaggedSentence> read_corpus(std::istream& in);
std::vector<TaggedSentence> read_corpus_file(const std::filesystem::path& path);

}  // namespace detox

#endif  // DETOX_DATASET_H_
