// Copyright 2026 The LETW Authors.
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

#ifndef LETW_CLI_HPP_
#define LETW_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace letw::cli {

// Process exit codes; stable for rollout scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSloEscalated = 3;

inline constexpr unsigned long long kDefaultSeed = 42;

// Runs the command line `args` (args[0] is the program name). Human-readable
// output goes to `out`, diagnostics to `err`; JSON artifacts go to --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace letw::cli

#endif  // LETW_CLI_HPP_
