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

#ifndef QPQSIM_REPORT_H_
#define QPQSIM_REPORT_H_

// Serialized forms of the library's results. JSON documents carry a
// "schema_version" field; CSV headers are fixed.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "qpqsim/analytics.h"
#include "qpqsim/bounds.h"
#include "qpqsim/chsh.h"
#include "qpqsim/qpq.h"

namespace qpqsim {

inline constexpr int kSchemaVersion = 1;

// Pretty-printed JSON (two-space indent, trailing newline).
//   {schema_version, rounds, wins, win_rate, threshold, slack_delta, aborted}
std::string ChshResultJson(const ChshTestResult& result);
//   {schema_version, gamma, n, epsilon_chsh, epsilon_qpq, delta, nu}
std::string BoundsJson(const BoundsParams& params, const BoundsReport& report);
// Counts and rates; the key strings are included only when include_keys.
std::string KeyGenJson(const KeyGenResult& result, bool include_keys = false);
std::string ProtocolOutcomeJson(const ProtocolOutcome& outcome);

// Header "theta,win_probability"; fixed-point with `digits` decimals.
std::string Figure1Csv(std::span<const CurvePoint> curve, int digits = 6);
// Header "x,y,a,b,probability", 10 decimal digits.
std::string ConditionalTableCsv(const ConditionalTable& table);

// Bit strings as ASCII '0'/'1'.
std::string FormatBits(std::span<const Bit> bits);
BitString ParseBits(std::string_view text);
// Database file: one or more lines of '0'/'1' characters, concatenated in
// order. Blank lines and trailing whitespace are ignored; anything else
// throws InvalidParameter.
BitString ParseDatabase(std::string_view text);
BitString ReadDatabaseFile(const std::filesystem::path& path);

// Writes `contents` to a sibling temporary file, then renames it over `path`.
void WriteFileAtomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace qpqsim

#endif  // QPQSIM_REPORT_H_
