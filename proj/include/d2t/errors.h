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

#ifndef D2T_ERRORS_H_
#define D2T_ERRORS_H_

#include <stdexcept>
#include <string>

namespace d2t {

// Bad input data, malformed files, violated preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A remote backend could not be reached or answered with a non-2xx status.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string &endpoint, int status,
                 const std::string &message)
      : std::runtime_error(endpoint + ": " + message +
                           (status > 0 ? " (status " + std::to_string(status) +
                                             ")"
                                       : "")),
        endpoint_(endpoint),
        status_(status) {}

  const std::string &endpoint() const { return endpoint_; }

  // HTTP status, or 0 when no response was received.
  int status() const { return status_; }

 private:
  std::string endpoint_;
  int status_;
};

// A remote backend answered, but the payload breaks the wire contract.
class ProtocolError : public TransportError {
 public:
  ProtocolError(const std::string &endpoint, const std::string &message)
      : TransportError(endpoint, 0, "protocol error: " + message) {}
};

}  // namespace d2t

#endif  // D2T_ERRORS_H_
