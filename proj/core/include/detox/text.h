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

#ifndef DETOX_TEXT_H_
#define DETOX_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace detox {

using Tokens = std::vector<std::string>;

// ASCII-only case folding; bytes >= 0x80 pass through untouched.
std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

bool is_ascii_alnum(char c);
bool is_ascii_alpha(char c);
bool is_ascii_punct(char c);

}  // namespace detox

#endif  // DETOX_TEXT_H_
