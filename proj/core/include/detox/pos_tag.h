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

#ifndef DETOX_POS_TAG_H_
#define DETOX_POS_TAG_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace detox {

// The 17 Universal POS tags plus kBw, the sentinel that replaces the tag of a
// restricted word.
enum class PosTag : uint8_t {
  kAdj,
  kAdp,
  kAdv,
  kAux,
  kCconj,
  kDet,
  kIntj,
  kNoun,
  kNum,
  kPart,
  kPron,
  kPropn,
  kPunct,
  kSconj,
  kSym,
  kVerb,
  kX,
  kBw,
};

inline constexpr size_t kPosTagCount = 18;
inline constexpr size_t kUniversalTagCount = 17;

std::string_view tag_name(PosTag tag);
std::optional<PosTag> parse_tag(std::string_view name);

}  // namespace detox

#endif  // DETOX_POS_TAG_H_
