// Copyright 2026 The dynmap Authors
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


#ifndef DYNMAP_COMMANDS_HPP
#define DYNMAP_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace dynmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `dynmap` subcommand. `args` excludes the program name. The JSON
/// report (or, for `pad` and `random`, the emitted spec file) goes to `--out` when
/// given, to `out` otherwise; help text also goes to `out`. Failures still produce a
/// report, with status "error" and the error code name.
int run_command(const std::vector<std::string> &args, std::ostream &out);

}  // namespace dynmap::cli

#endif
