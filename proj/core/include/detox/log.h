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

#ifndef DETOX_LOG_H_
#define DETOX_LOG_H_

#include <functional>
#include <string>

namespace detox {

// Structured diagnostics. Each event is one JSON object serialized on a
// single line. The default sink writes to stderr; tests and tools may swap it,
// and an empty sink discards events.
using LogSink = std::function<void(const std::string& json_line)>;

void set_log_sink(LogSink sink);
void emit_log_line(const std::string& json_line);

}  // namespace detox

#endif  // DETOX_LOG_H_
