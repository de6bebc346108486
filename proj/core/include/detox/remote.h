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

#ifndef DETOX_REMOTE_H_
#define DETOX_REMOTE_H_

#include <chrono>
#include <string>

namespace detox {

// Address of the optional model server, e.g. "http://127.0.0.1:8080".
struct RemoteEndpoint {
  std::string url;
  std::chrono::milliseconds timeout{10000};
  // Upper bound on concurrent requests issued by one client object.
  size_t max_in_flight = 4;
};

}  // namespace detox

#endif  // DETOX_REMOTE_H_
