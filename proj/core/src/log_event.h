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

#ifndef DETOX_SRC_LOG_EVENT_H_
#define DETOX_SRC_LOG_EVENT_H_

#include <string_view>

#include <nlohmann/json.hpp>

#include "detox/log.h"

namespace detox::internal {

inline void log_event(std::string_view event, nlohmann::ordered_json fields = {}) {
  nlohmann::ordered_json line;
  line["event"] = event;
  if (fields.is_object()) {
    for (auto& [k, v] : fields.items()) line[k] = v;
  }
  emit_log_line(line.dump());
}

}  // namespace detox::internal

#endif  // DETOX_SRC_LOG_EVENT_H_
