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

#ifndef D2T_SRC_HTTP_CLIENT_H_
#define D2T_SRC_HTTP_CLIENT_H_

#include <string>

#include "json.hpp"

namespace d2t {
namespace internal {

// POSTs a JSON body to endpoint + path and returns the parsed JSON reply.
// Throws TransportError when no 200 response arrives and ProtocolError when
// the body is not JSON.
nlohmann::json PostJson(const std::string &endpoint, const std::string &path,
                        const nlohmann::json &body, double timeout_seconds);

}  // namespace internal
}  // namespace d2t

#endif  // D2T_SRC_HTTP_CLIENT_H_
