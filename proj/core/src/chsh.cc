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

#include "qpqsim/chsh.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpqsim/error.h"

namespace qpqsim {

std::size_t ChshSubsetSize(std::size_t n, double gamma) {
  const double exact = gamma * static_cast<double>(n);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(exact));
}

Partition PartitionIndices(std::size_t n, double gamma, RandomStream& rng) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in (0, 1)");
  if (n < 2) throw InvalidParameter("partition needs at least two pairs");
  const std::size_t test_size = ChshSubsetSize(n, gamma);
  if (test_size < 1 || test_size >= n) {
    throw InvalidParameter("gamma * n leaves the test set or the key set empty");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first test_size slots form a uniform subset.
  for (std::size_t i = 0; i < test_size; ++i) {
    std::swap(order[i], order[i + rng.Below(n - i)]);
  }
  Partition partition;
  partition.chsh.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_size));
  partition.qpq.assign(order.begin() + static_cast<std::ptrdiff_t>(test_size), order.end());
  std::sort(partition.chsh.begin(), partition.chsh.end());
  std::sort(partition.qpq.begin(), partition.qpq.end());
  return partition;
}

ChshGame::ChshGame(const SourceModel& source, const ProtocolAngles& angles) {
  const TwoQubitState state = EntangledSourceState(source);
  const MeasurementBasis first[2] = {MeasurementBasis::Computational(),
                                     MeasurementBasis::Hadamard()};
  const MeasurementBasis second[2] = {
      MeasurementBasis::FromAngle(angles.psi1(), BasisLabel::kPsi1),
      MeasurementBasis::FromAngle(angles.psi2(), BasisLabel::kPsi2)};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      dists_[2 * x + y] = JointOutcomeProbabilities(state, first[x], second[y]);
    }
  }
}

ChshRecord ChshGame::PlayRound(RandomStream& rng) const {
  ChshRecord r;
  r.x = rng.Bit();
  r.y = rng.Bit();
  const int cell = SampleCell(Distribution(r.x, r.y), rng);
  r.a = static_cast<std::uint8_t>(cell >> 1);
  r.b = static_cast<std::uint8_t>(cell & 1);
  r.win = IsWinningCell(r.x, r.y, r.a, r.b);
  return r;
}

double ChshGame::ExpectedWinProbability() const {
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (IsWinningCell(x, y, a, b)) total += 0.25 * Distribution(x, y)[PairIndex(a, b)];
        }
      }
    }
  }
  return total;
}

ChshRecord PlayRound(const SourceModel& source, const ProtocolAngles& angles, RandomStream& rng) {
  return ChshGame(source, angles).PlayRound(rng);
}

ChshTestResult RunLocalTest(std::size_t n_test, const SourceModel& source,
                            const ProtocolAngles& angles, double slack_delta, SeedKey key,
                            const CampaignOptions& options) {
  if (n_test < 1) throw InvalidParameter("local test needs at least one round");
  if (!(slack_delta >= 0.0) || !std::isfinite(slack_delta)) {
    throw InvalidParameter("slack delta must be a finite non-negative number");
  }
  const ChshGame game(source, angles);

  const std::size_t blocks = (n_test + kRoundsPerBlock - 1) / kRoundsPerBlock;
  std::vector<std::array<std::uint64_t, 16>> block_counts(blocks);
  std::vector<ChshRecord> records;
  if (options.keep_records) records.resize(n_test);

  ForEachBlock(n_test, kRoundsPerBlock, options.threads,
               [&](std::size_t block, std::size_t begin, std::size_t end) {
                 RandomStream rng = key.Child(block).Stream();
                 auto& counts = block_counts[block];
                 counts.fill(0);
                 for (std::size_t i = begin; i < end; ++i) {
                   const ChshRecord r = game.PlayRound(rng);
                   ++counts[ConditionalTable::Index(r.x, r.y, r.a, r.b)];
                   if (options.keep_records) records[i] = r;
                 }
               });

  ChshTestResult result;
  result.rounds = n_test;
  for (const auto& counts : block_counts) {
    for (int c = 0; c < 16; ++c) result.cell_counts[c] += counts[c];
  }
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (IsWinningCell(x, y, a, b)) {
            result.wins += result.cell_counts[ConditionalTable::Index(x, y, a, b)];
          }
        }
      }
    }
  }
  result.win_rate = static_cast<double>(result.wins) / static_cast<double>(n_test);
  result.threshold = ChshWinProbability(angles);
  result.slack_delta = slack_delta;
  result.aborted = result.win_rate < result.threshold - slack_delta;
  if (options.keep_records) result.records = std::move(records);
  return result;
}

}  // namespace qpqsim
