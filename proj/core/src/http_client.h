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

#ifndef DETOX_SRC_HTTP_CLIENT_H_
#define DETOX_SRC_HTTP_CLIENT_H_

#include <memory>
#include <semaphore>
#include <string_view>

#include <nlohmann/json.hpp>

#include "detox/remote.h"

namespace detox::internal {

// Posts JSON bodies to one model server. Each call opens its own connection,
// so a JsonClient may be shared across threads; at most
// endpoint.max_in_flight calls proceed at once.
class JsonClient {
 public:
  explicit JsonClient(RemoteEndpoint endpoint);
  ~JsonClient();

  // Throws kRemoteUnavailable on transport failure or a 5xx status, and
  // kRemoteProtocol on a 4xx status or a response body that is not a JSON
  // object.
  nlohmann::json post(std::string_view path, const nlohmann::json& body) const;

  const RemoteEndpoint& endpoint() const { return endpoint_; }

 private:
  RemoteEndpoint endpoint_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace detox::internal

#endif  // DETOX_SRC_HTTP_CLIENT_H_
