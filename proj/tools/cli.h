//
// Copyright 2026 The dpmf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end.
//
//   dpmf coeffs       --n N --alpha A --beta B [--p P]
//   dpmf sensitivity  --kind K --n N --alpha A --beta B --b B --k K [--p P]
//                     [--method auto|closed-form|max-column|banded-dp|
//                      enumeration|relaxed-bound|all] [--max-enum N]
//   dpmf error-table  --n LIST --alpha LIST --beta LIST [--b LIST] [--k K|max]
//                     [--p P] --kinds LIST [--max-iters I] [--tol T]
//   dpmf aof          --n N --alpha A --beta B --b BAND [--k K|max]
//                     [--max-iters I] [--tol T] [--allow-large] [--dump-c F]
//   dpmf noise-sim    --kind K --n N --alpha A --beta B [--b B] [--k K|max]
//                     [--p P] --d D --sigma S --trials T --seed SEED
//
// Every subcommand accepts --format csv|json, --output FILE and --threads T.
// LIST is a comma-separated list whose items are numbers or ranges
// first:last:step. Exit codes: 0 success, 2 invalid arguments, 3 numerical
// failure. Progress and diagnostics go to standard error.

#ifndef DPMF_TOOLS_CLI_H_
#define DPMF_TOOLS_CLI_H_

#include <ostream>

namespace dpmf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidArguments = 2;
inline constexpr int kExitNumericalFailure = 3;

// Largest n accepted by `aof` without --allow-large.
inline constexpr int kAofDefaultMaxN = 2000;

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dpmf

#endif  // DPMF_TOOLS_CLI_H_
