// Copyright 2026 The dualcons Authors
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

// The dualcons command line: train, probe, verify, report and gen-corpus.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 verification
// violation, 3 runtime failure. DUALCONS_LOG sets log verbosity (trace,
// debug, info, warn, error, off; default info).

#ifndef DUALCONS_CLI_H_
#define DUALCONS_CLI_H_

#include <ostream>

namespace dualcons {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitRuntime = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dualcons

#endif  // DUALCONS_CLI_H_
