//
// Copyright 2026 The ggdp Authors
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

#ifndef GGDP_TOOLS_CLI_H_
#define GGDP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace ggdp::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Runs the ggdp command line. args[0] is the program name. Regular output
// goes to `out`, diagnostics and usage text to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// "a:b:step" (inclusive, tolerant to round-off) or "x,y,z".
std::vector<double> ParseGrid(const std::string& text);

}  // namespace ggdp::cli

#endif  // GGDP_TOOLS_CLI_H_
