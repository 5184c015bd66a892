// Copyright 2026 The qpqsim Authors.
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

#ifndef QPQSIM_TOOLS_CLI_H_
#define QPQSIM_TOOLS_CLI_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qpqsim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitAborted = 2,
  kExitVerifyFailed = 3,
};

// Parses "0.7854", "pi", "-pi/2", "3pi/4", "3*pi/16", "1/3" into radians.
// Throws InvalidParameter on anything else.
double ParseAngle(std::string_view text);

// "a:b,c:d" -> {(a, b), (c, d)} using ParseAngle for each side.
std::vector<std::pair<double, double>> ParseAnglePairs(std::string_view text);

// Entry point shared by the executable and tests. Reports go to `out`,
// diagnostics to `err`.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Quick oracle self-checks behind `qpqsim verify`; returns true when all pass.
bool RunVerification(std::uint64_t seed, std::size_t rounds, unsigned threads, std::ostream& log,
                     std::string& json_report);

}  // namespace qpqsim::cli

#endif  // QPQSIM_TOOLS_CLI_H_
