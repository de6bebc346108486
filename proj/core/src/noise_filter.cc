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

#include <fstream>
#include <sstream>

#include "detox/corpus.h"
#include "detox/error.h"

namespace detox {

// Keep in sync with data/noise_filters.tsv; a unit test compares the two.
const std::string_view kDefaultNoiseFilterRules =
    "# Sentence noise filters. A sentence matching any rule is dropped.\n"
    "# Format: name<TAB>ECMAScript regex, matched case-insensitively.\n"
    "url\t(https?://|ftp://|www\\.)\\S+|\\b[a-z0-9-]+\\.(com|org|net|edu|gov|io|co|ly|me|uk)\\b\n"
    "email\t[a-z0-9._%+-]+@[a-z0-9-]+(\\.[a-z0-9-]+)*\\.[a-z]{2,}\n"
    "date\t\\b\\d{1,4}[/.-]\\d{1,2}[/.-]\\d{1,4}\\b|\\b(jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec)[a-z]*\\.?\\s+\\d{1,2}(st|nd|rd|th)?\\b\n"
    "time\t\\b\\d{1,2}:\\d{2}(:\\d{2})?\\s*([ap]\\.?m\\.?)?|\\b\\d{1,2}\\s*[ap]\\.?m\\.?(\\s|$)\n"
    "number\t\\d+([.,]\\d+)*\n"
    "emoticon\t(^|\\s)([:;=8][-'^o]?[)(\\]\\[dp/\\\\|*3]|[)(\\]\\[][-'^o]?[:;=]|<3|\\^_?\\^|xd)(?=\\s|$|[.,!?])\n";

NoiseFilter NoiseFilter::parse(std::string_view text) {
  NoiseFilter filter;
  std::istringstream in{std::string(text)};
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw Error(ErrorCode::kParse,
                  "noise filter line " + std::to_string(line_no) + ": expected name<TAB>pattern");
    }
    Rule rule;
    rule.name = line.substr(0, tab);
    rule.pattern = line.substr(tab + 1);
    try {
      rule.regex = std::regex(rule.pattern, std::regex::ECMAScript | std::regex::icase |
                                                std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kParse, "noise filter '" + rule.name + "': " + e.what());
    }
    filter.rules_.push_back(std::move(rule));
  }
  return filter;
}

NoiseFilter NoiseFilter::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read noise filter file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const NoiseFilter& NoiseFilter::defaults() {
  static const NoiseFilter filter = parse(kDefaultNoiseFilterRules);
  return filter;
}

std::optional<std::string_view> NoiseFilter::match(std::string_view sentence) const {
  for (const auto& rule : rules_) {
    if (std::regex_search(sentence.begin(), sentence.end(), rule.regex)) return rule.name;
  }
  return std::nullopt;
}

}  // namespace detox
