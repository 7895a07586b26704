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

#ifndef D2T_CLI_H_
#define D2T_CLI_H_

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2t/decoder.h"

namespace d2t {

// Exit codes of the d2t tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBackend = 2;

// Environment variable overriding both remote backend endpoints.
inline constexpr const char *kEndpointEnv = "D2T_ENDPOINT";

// Settings shared by all subcommands. Precedence: command-line flags, then
// the endpoint environment variable, then the --config file, then the
// defaults below.
struct RunConfig {
  int beam_size = 10;
  int vocab_size = 100;
  std::string strategy = "all";
  std::string checker = "entities";
  std::string scorer = "ngram";
  std::string fuser = "rules";
  std::string scorer_endpoint;
  std::string fuser_endpoint;
  int ngram_order = 3;
  double ngram_k = 0.1;
  std::string slot_patterns;
  std::string lm_corpus;
  std::vector<std::string> templates;
  std::string persons;
  int max_triples = 0;  // 0 = no cap
  bool pair_start = true;
};

// "key = value" lines; '#' starts a comment. Unknown keys and malformed
// values throw ValidationError.
void ApplyConfigText(const std::string &text, RunConfig *config);
void ApplyConfigFile(const std::string &path, RunConfig *config);

// Throws ValidationError for out-of-range or unknown enumerated values.
void ValidateRunConfig(const RunConfig &config);

// Writes through a temporary sibling file renamed over `path` on success.
// Nothing is left at `path` if `write` throws.
void WriteFileAtomically(const std::string &path,
                         const std::function<void(std::ostream &)> &write);

// Human-readable rendering of a trace file's steps.
std::string RenderTrace(const std::vector<StepTrace> &steps);

// Word-level diff: "{+added+}" and "[-removed-]" around changed runs.
std::string WordDiff(std::string_view before, std::string_view after);

// Runs the tool; args excludes the program name.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

}  // namespace d2t

#endif  // D2T_CLI_H_
