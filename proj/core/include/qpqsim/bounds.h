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

#ifndef QPQSIM_BOUNDS_H_
#define QPQSIM_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "qpqsim/analytics.h"
#include "qpqsim/quantum.h"
#include "qpqsim/random.h"

namespace qpqsim {

struct BoundsParams {
  double gamma = 0.5;
  std::uint64_t n = 0;
  double epsilon_chsh = 1e-6;
  double epsilon_qpq = 1e-6;

  // gamma, both epsilons in (0, 1); gamma n >= 1 and (1 - gamma) n >= 1.
  void Validate() const;
};

struct BoundsReport {
  double delta = 0.0;
  double nu = 0.0;
};

// Deviation of the tested win rate: exp(-2 delta^2 gamma n) = epsilon_chsh,
// i.e. delta = sqrt(ln(1/epsilon_chsh) / (2 gamma n)).
double ChernoffDelta(const BoundsParams& params);

// Transfer deviation between the test set and the key set:
// nu = sqrt((gamma n + 1) / (2 gamma^2 (1 - gamma) n^2) ln(1/epsilon_qpq)).
double SerflingNu(const BoundsParams& params);

BoundsReport ComputeBounds(const BoundsParams& params);

// Hoeffding tail bound exp(-2 delta^2 n) for the mean of n variables in [0,1].
double HoeffdingTailBound(double delta, std::size_t n);

// Deviation threshold for |mu_K - mu_T| where T is a uniformly random subset
// of size t drawn from n values in [0,1] and K is its complement:
// sqrt(n (t + 1) / (2 t^2 (n - t)) ln(1/epsilon)).
double SamplingWithoutReplacementDeviation(std::size_t n, std::size_t t, double epsilon);

// Runs `trials` independent CHSH campaigns of rounds_per_trial rounds and
// returns the fraction with |win_rate - expected| >= delta.
double EmpiricalChernoffTail(std::size_t trials, std::size_t rounds_per_trial, double expected,
                             double delta, const SourceModel& source,
                             const ProtocolAngles& angles, SeedKey key, unsigned threads = 1);

// Draws `trials` random partitions of win_flags (test set of size
// ceil(gamma n)) and returns the fraction with |mu_test - mu_rest| >= nu.
double EmpiricalPartitionDeviation(double gamma, std::span<const std::uint8_t> win_flags,
                                   double nu, std::size_t trials, SeedKey key,
                                   unsigned threads = 1);

// Same probability computed by enumerating every test subset. Intended for
// small inputs; throws InvalidParameter when win_flags.size() > 25.
double ExactPartitionDeviation(double gamma, std::span<const std::uint8_t> win_flags, double nu);

}  // namespace qpqsim

#endif  // QPQSIM_BOUNDS_H_
