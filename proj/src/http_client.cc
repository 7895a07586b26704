// Copyright 2026 The d2t-edit Authors.
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

#include "d2t/errors.h"
#include "httplib.h"

namespace d2t {
namespace internal {

nlohmann::json PostJson(const std::string &endpoint, const std::string &path,
                        const nlohmann::json &body, double timeout_seconds) {
  std::string base = endpoint;
  while (!base.empty() && base.back() == '/') base.pop_back();
  if (base.find("://") == std::string::npos) base = "http://" + base;

  httplib::Client client(base);
  if (!client.is_valid()) {
    throw TransportError(endpoint, 0, "invalid endpoint");
  }
  auto usec = static_cast<time_t>(timeout_seconds * 1e6);
  client.set_connection_timeout(usec / 1000000, usec % 1000000);
  client.set_read_timeout(usec / 1000000, usec % 1000000);
  client.set_write_timeout(usec / 1000000, usec % 1000000);

  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw TransportError(endpoint, 0,
                         "POST " + path + " failed: " +
                             httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError(endpoint, res->status, "POST " + path + " rejected");
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(endpoint, "POST " + path + ": invalid JSON: " +
                                      e.what());
  }
}

}  // namespace internal
}  // namespace d2t
