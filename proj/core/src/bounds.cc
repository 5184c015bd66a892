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

#include "qpqsim/bounds.h"

#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "qpqsim/chsh.h"
#include "qpqsim/error.h"

namespace qpqsim {
namespace {

void RequireOpenUnit(double value, const char* what) {
  if (!(value > 0.0 && value < 1.0)) throw InvalidParameter(std::string(what) + " must lie in (0, 1)");
}

double SubsetGap(std::size_t n, std::size_t t, std::size_t total_ones, std::size_t test_ones) {
  const double mu_test = static_cast<double>(test_ones) / static_cast<double>(t);
  const double mu_rest = static_cast<double>(total_ones - test_ones) / static_cast<double>(n - t);
  return std::abs(mu_rest - mu_test);
}

std::size_t CountOnes(std::span<const std::uint8_t> flags) {
  std::size_t ones = 0;
  for (std::uint8_t f : flags) {
    if (f > 1) throw InvalidParameter("win flags must be 0 or 1");
    ones += f;
  }
  return ones;
}

std::size_t TestSetSize(std::size_t n, double gamma) {
  RequireOpenUnit(gamma, "gamma");
  const std::size_t t = ChshSubsetSize(n, gamma);
  if (n < 2 || t < 1 || t >= n) throw InvalidParameter("gamma * n leaves a side of the partition empty");
  return t;
}

}  // namespace

void BoundsParams::Validate() const {
  RequireOpenUnit(gamma, "gamma");
  RequireOpenUnit(epsilon_chsh, "epsilon_chsh");
  RequireOpenUnit(epsilon_qpq, "epsilon_qpq");
  const double nd = static_cast<double>(n);
  if (gamma * nd < 1.0 || (1.0 - gamma) * nd < 1.0) {
    throw InvalidParameter("gamma n and (1 - gamma) n must both be at least 1");
  }
}

double ChernoffDelta(const BoundsParams& params) {
  params.Validate();
  const double tested = params.gamma * static_cast<double>(params.n);
  return std::sqrt(std::log(1.0 / params.epsilon_chsh) / (2.0 * tested));
}

double SerflingNu(const BoundsParams& params) {
  params.Validate();
  const double n = static_cast<double>(params.n);
  const double g = params.gamma;
  return std::sqrt((g * n + 1.0) / (2.0 * g * g * (1.0 - g) * n * n) *
                   std::log(1.0 / params.epsilon_qpq));
}

BoundsReport ComputeBounds(const BoundsParams& params) {
  return {ChernoffDelta(params), SerflingNu(params)};
}

double HoeffdingTailBound(double delta, std::size_t n) {
  if (!(delta >= 0.0)) throw InvalidParameter("delta must be non-negative");
  return std::exp(-2.0 * delta * delta * static_cast<double>(n));
}

double SamplingWithoutReplacementDeviation(std::size_t n, std::size_t t, double epsilon) {
  RequireOpenUnit(epsilon, "epsilon");
  if (t < 1 || t >= n) throw InvalidParameter("subset size must lie in [1, n)");
  const double nd = static_cast<double>(n);
  const double td = static_cast<double>(t);
  return std::sqrt(nd * (td + 1.0) / (2.0 * td * td * (nd - td)) * std::log(1.0 / epsilon));
}

double EmpiricalChernoffTail(std::size_t trials, std::size_t rounds_per_trial, double expected,
                             double delta, const SourceModel& source,
                             const ProtocolAngles& angles, SeedKey key, unsigned threads) {
  if (trials < 1 || rounds_per_trial < 1) throw InvalidParameter("trials and rounds must be positive");
  if (!(delta >= 0.0)) throw InvalidParameter("delta must be non-negative");
  const ChshGame game(source, angles);
  std::vector<std::uint8_t> exceeded(trials, 0);
  ForEachBlock(trials, 1, threads, [&](std::size_t trial, std::size_t, std::size_t) {
    RandomStream rng = key.Child(trial).Stream();
    std::size_t wins = 0;
    for (std::size_t r = 0; r < rounds_per_trial; ++r) wins += game.PlayRound(rng).win ? 1 : 0;
    const double rate = static_cast<double>(wins) / static_cast<double>(rounds_per_trial);
    exceeded[trial] = std::abs(rate - expected) >= delta ? 1 : 0;
  });
  const std::size_t hits = std::accumulate(exceeded.begin(), exceeded.end(), std::size_t{0});
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double EmpiricalPartitionDeviation(double gamma, std::span<const std::uint8_t> win_flags,
                                   double nu, std::size_t trials, SeedKey key, unsigned threads) {
  if (trials < 1) throw InvalidParameter("trials must be positive");
  const std::size_t n = win_flags.size();
  const std::size_t t = TestSetSize(n, gamma);
  const std::size_t ones = CountOnes(win_flags);

  constexpr std::size_t kTrialsPerBlock = 256;
  std::vector<std::size_t> block_hits((trials + kTrialsPerBlock - 1) / kTrialsPerBlock, 0);
  ForEachBlock(trials, kTrialsPerBlock, threads,
               [&](std::size_t block, std::size_t begin, std::size_t end) {
                 std::vector<std::size_t> order(n);
                 for (std::size_t trial = begin; trial < end; ++trial) {
                   RandomStream rng = key.Child(trial).Stream();
                   std::iota(order.begin(), order.end(), std::size_t{0});
                   std::size_t test_ones = 0;
                   for (std::size_t i = 0; i < t; ++i) {
                     std::swap(order[i], order[i + rng.Below(n - i)]);
                     test_ones += win_flags[order[i]];
                   }
                   if (SubsetGap(n, t, ones, test_ones) >= nu) ++block_hits[block];
                 }
               });
  const std::size_t hits = std::accumulate(block_hits.begin(), block_hits.end(), std::size_t{0});
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double ExactPartitionDeviation(double gamma, std::span<const std::uint8_t> win_flags, double nu) {
  const std::size_t n = win_flags.size();
  if (n > 25) throw InvalidParameter("exhaustive partition enumeration limited to 25 flags");
  const std::size_t t = TestSetSize(n, gamma);
  const std::size_t ones = CountOnes(win_flags);

  std::uint32_t flag_mask = 0;
  for (std::size_t i = 0; i < n; ++i) flag_mask |= static_cast<std::uint32_t>(win_flags[i]) << i;

  std::uint64_t subsets = 0;
  std::uint64_t hits = 0;
  const std::uint32_t limit = std::uint32_t{1} << n;
  // Gosper's hack: visit every n-bit mask with exactly t bits set.
  for (std::uint32_t mask = (std::uint32_t{1} << t) - 1; mask < limit;) {
    ++subsets;
    const auto test_ones = static_cast<std::size_t>(std::popcount(mask & flag_mask));
    if (SubsetGap(n, t, ones, test_ones) >= nu) ++hits;
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t ripple = mask + low;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
  }
  return static_cast<double>(hits) / static_cast<double>(subsets);
}

}  // namespace qpqsim
