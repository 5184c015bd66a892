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

#ifndef QPQSIM_CHSH_H_
#define QPQSIM_CHSH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qpqsim/analytics.h"
#include "qpqsim/quantum.h"
#include "qpqsim/random.h"

namespace qpqsim {

struct ChshRecord {
  std::uint8_t x = 0;
  std::uint8_t y = 0;
  std::uint8_t a = 0;
  std::uint8_t b = 0;
  bool win = false;
};

// Index split of n pairs into the test set and the key-generation set. Both
// lists are sorted ascending and 0-based.
struct Partition {
  std::vector<std::size_t> chsh;
  std::vector<std::size_t> qpq;
};

// ceil(gamma * n), tolerant of floating-point noise in gamma * n.
std::size_t ChshSubsetSize(std::size_t n, double gamma);

// Uniformly random subset of size ceil(gamma n) plus its complement.
// Throws InvalidParameter if either side would be empty or gamma is not in
// (0, 1).
Partition PartitionIndices(std::size_t n, double gamma, RandomStream& rng);

// Bob's local test apparatus. First particle: computational basis for x = 0,
// Hadamard for x = 1. Second particle: {psi1} for y = 0, {psi2} for y = 1.
// The four joint outcome distributions are computed once from the Born rule.
class ChshGame {
 public:
  ChshGame(const SourceModel& source, const ProtocolAngles& angles);

  ChshRecord PlayRound(RandomStream& rng) const;

  // Born-rule joint distribution for inputs (x, y).
  const JointDistribution& Distribution(int x, int y) const { return dists_[2 * x + y]; }
  // Exact win probability of this (possibly skewed) source at these angles.
  double ExpectedWinProbability() const;

 private:
  std::array<JointDistribution, 4> dists_;
};

ChshRecord PlayRound(const SourceModel& source, const ProtocolAngles& angles, RandomStream& rng);

struct CampaignOptions {
  // 0 selects DefaultThreadCount(). Results do not depend on this value.
  unsigned threads = 1;
  bool keep_records = false;
};

struct ChshTestResult {
  std::size_t rounds = 0;
  std::size_t wins = 0;
  double win_rate = 0.0;
  double threshold = 0.0;
  double slack_delta = 0.0;
  bool aborted = false;
  // Counts per (x, y, a, b), indexed like ConditionalTable::Index.
  std::array<std::uint64_t, 16> cell_counts{};
  std::optional<std::vector<ChshRecord>> records;
};

// Plays n_test independent rounds and applies the abort rule
//   win_rate < ChshWinProbability(angles) - slack_delta.
// slack_delta = 0 is the literal threshold; ChernoffDelta(...) gives the
// finite-statistics version.
ChshTestResult RunLocalTest(std::size_t n_test, const SourceModel& source,
                            const ProtocolAngles& angles, double slack_delta, SeedKey key,
                            const CampaignOptions& options = {});

}  // namespace qpqsim

#endif  // QPQSIM_CHSH_H_
