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

#include "http_client.h"

#include <httplib.h>

#include "detox/error.h"

namespace detox::internal {

JsonClient::JsonClient(RemoteEndpoint endpoint)
    : endpoint_(std::move(endpoint)),
      slots_(std::make_unique<std::counting_semaphore<>>(
          static_cast<std::ptrdiff_t>(std::max<size_t>(1, endpoint_.max_in_flight)))) {
  if (endpoint_.url.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote endpoint URL is empty");
  }
}

JsonClient::~JsonClient() = default;

nlohmann::json JsonClient::post(std::string_view path, const nlohmann::json& body) const {
  slots_->acquire();
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{slots_.get()};

  httplib::Client client(endpoint_.url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string where = endpoint_.url + std::string(path);
  auto res = client.Post(std::string(path), body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kRemoteUnavailable,
                where + " unreachable (" + httplib::to_string(res.error()) + ")");
  }
  if (res->status < 200 || res->status >= 300) {
    const bool rejected = res->status >= 400 && res->status < 500;
    throw Error(rejected ? ErrorCode::kRemoteProtocol : ErrorCode::kRemoteUnavailable,
                where + " returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorCode::kRemoteProtocol, where + " returned a non-object JSON body");
  }
  return parsed;
}

}  // namespace detox::internal
