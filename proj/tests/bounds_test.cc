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

#include <gtest/gtest.h>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "qpqsim/error.h"
#include "test_util.h"

namespace qpqsim {
namespace {

using testing::BinomialSigma;
using testing::kPi;
using Wide = boost::multiprecision::cpp_bin_float_50;

TEST(ChernoffDeltaTest, Examples) {
  // Root of exp(-2 d^2 1e5) = 1e-9, solved at 50 digits.
  const double delta = ChernoffDelta({0.1, 1'000'000, 1e-9, 1e-6});
  EXPECT_NEAR(delta, 0.010179210636622668, 1e-15);
  EXPECT_NEAR(delta, 0.010180, 1e-6);
  EXPECT_LT(ChernoffDelta({0.3, 1000, 1.0 - 1e-12, 0.5}), 1e-6);
}

TEST(ChernoffDeltaTest, QuadruplingNHalvesDelta) {
  for (std::uint64_t n : {1000ULL, 12345ULL, 1'000'000ULL}) {
    const double d1 = ChernoffDelta({0.25, n, 1e-5, 1e-5});
    const double d4 = ChernoffDelta({0.25, 4 * n, 1e-5, 1e-5});
    EXPECT_NEAR(d4, d1 / 2, 1e-15);
  }
}

TEST(SerflingNuTest, Examples) {
  EXPECT_NEAR(SerflingNu({0.5, 10'000, 1e-6, 1e-6}), 0.052570473956539268, 1e-15);
  EXPECT_LT(SerflingNu({0.5, 10'000, 1e-6, 1.0 - 1e-12}), 1e-6);
  const double a = SerflingNu({0.5, 10'000, 1e-6, 1e-6});
  const double b = SerflingNu({0.5, 100'000, 1e-6, 1e-6});
  const double c = SerflingNu({0.5, 1'000'000, 1e-6, 1e-6});
  EXPECT_GT(a, b);
  EXPECT_GT(b, c);
}

TEST(BoundsTest, FormulasMatchExtendedPrecision) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> gamma_dist(0.01, 0.99);
  std::uniform_real_distribution<double> log_eps(-30.0, -0.1);
  std::uniform_int_distribution<std::uint64_t> n_dist(200, 1'000'000'000);
  for (int i = 0; i < 100; ++i) {
    const BoundsParams p{gamma_dist(gen), n_dist(gen), std::exp(log_eps(gen)), std::exp(log_eps(gen))};
    const Wide g = p.gamma;
    const Wide n = static_cast<double>(p.n);
    const Wide delta = sqrt(log(Wide(1) / Wide(p.epsilon_chsh)) / (2 * g * n));
    const Wide nu = sqrt((g * n + 1) / (2 * g * g * (1 - g) * n * n) * log(Wide(1) / Wide(p.epsilon_qpq)));
    const BoundsReport r = ComputeBounds(p);
    EXPECT_NEAR(r.delta, delta.convert_to<double>(), 1e-13 * delta.convert_to<double>());
    EXPECT_NEAR(r.nu, nu.convert_to<double>(), 1e-13 * nu.convert_to<double>());
  }
}

TEST(BoundsTest, AsymptoticBehaviour) {
  double prev_delta = INFINITY;
  double prev_nu = INFINITY;
  for (std::uint64_t n : {10'000ULL, 100'000ULL, 1'000'000ULL, 10'000'000ULL, 100'000'000ULL}) {
    const BoundsReport r = ComputeBounds({0.5, n, 1e-6, 1e-6});
    EXPECT_LT(r.delta, prev_delta);
    EXPECT_LT(r.nu, prev_nu);
    prev_delta = r.delta;
    prev_nu = r.nu;
  }
  EXPECT_LT(prev_delta, 1e-3);
  EXPECT_LT(prev_nu, 1e-3);
}

TEST(BoundsTest, ValidateRejectsDegenerateParams) {
  EXPECT_THROW(ChernoffDelta({0.0, 100, 0.1, 0.1}), InvalidParameter);
  EXPECT_THROW(ChernoffDelta({1.0, 100, 0.1, 0.1}), InvalidParameter);
  EXPECT_THROW(ChernoffDelta({0.5, 100, 0.0, 0.1}), InvalidParameter);
  EXPECT_THROW(SerflingNu({0.5, 100, 0.1, 1.0}), InvalidParameter);
  EXPECT_THROW(SerflingNu({0.001, 100, 0.1, 0.1}), InvalidParameter);
  EXPECT_THROW(SerflingNu({0.999, 100, 0.1, 0.1}), InvalidParameter);
}

TEST(BoundsTest, GenericDeviationMatchesProtocolForm) {
  for (std::uint64_t n : {100ULL, 1000ULL, 10'000ULL}) {
    for (double gamma : {0.1, 0.5, 0.8}) {
      const std::size_t t = static_cast<std::size_t>(std::llround(gamma * n));
      EXPECT_NEAR(SamplingWithoutReplacementDeviation(n, t, 1e-4),
                  SerflingNu({gamma, n, 0.5, 1e-4}), 1e-12);
    }
  }
  EXPECT_THROW(SamplingWithoutReplacementDeviation(10, 10, 0.1), InvalidParameter);
}

TEST(HoeffdingTest, BoundValue) {
  EXPECT_NEAR(HoeffdingTailBound(0.05, 1000), 0.006737946999085467, 1e-15);
  EXPECT_EQ(HoeffdingTailBound(0.0, 1000), 1.0);
}

const ProtocolAngles kOptimal(kPi / 2, kPi / 4, 3 * kPi / 4);

TEST(EmpiricalChernoffTailTest, WithinHoeffdingBound) {
  const double expected = ChshWinProbability(kOptimal);
  const double tail = EmpiricalChernoffTail(1000, 1000, expected, 0.05,
                                            SourceModel::Honest(kPi / 2), kOptimal, SeedKey(1));
  const double bound = HoeffdingTailBound(0.05, 1000);
  EXPECT_LE(tail, bound + 3 * BinomialSigma(bound, 1000));
}

TEST(EmpiricalChernoffTailTest, TrivialDeltas) {
  const double expected = ChshWinProbability(kOptimal);
  const SourceModel source = SourceModel::Honest(kPi / 2);
  EXPECT_EQ(EmpiricalChernoffTail(50, 100, expected, 0.0, source, kOptimal, SeedKey(2)), 1.0);
  EXPECT_EQ(EmpiricalChernoffTail(50, 100, expected, 1.0, source, kOptimal, SeedKey(2)), 0.0);
}

TEST(EmpiricalChernoffTailTest, IndependentOfThreadCount) {
  const double expected = ChshWinProbability(kOptimal);
  const SourceModel source = SourceModel::Honest(kPi / 2);
  EXPECT_EQ(EmpiricalChernoffTail(64, 500, expected, 0.02, source, kOptimal, SeedKey(3), 1),
            EmpiricalChernoffTail(64, 500, expected, 0.02, source, kOptimal, SeedKey(3), 4));
}

TEST(PartitionDeviationTest, ConstantFlagsNeverDeviate) {
  const std::vector<std::uint8_t> ones(200, 1);
  EXPECT_EQ(EmpiricalPartitionDeviation(0.5, ones, 1e-9, 500, SeedKey(4)), 0.0);
  EXPECT_EQ(ExactPartitionDeviation(0.5, std::vector<std::uint8_t>(12, 1), 1e-9), 0.0);
}

TEST(PartitionDeviationTest, BernoulliFlagsWithinCorollaryBound) {
  std::mt19937_64 gen(5);
  std::bernoulli_distribution coin(0.85);
  std::vector<std::uint8_t> flags(1000);
  for (auto& f : flags) f = coin(gen);
  const double nu = SamplingWithoutReplacementDeviation(1000, 500, 0.01);
  const double tail = EmpiricalPartitionDeviation(0.5, flags, nu, 10'000, SeedKey(6));
  EXPECT_LE(tail, 0.01 + 3 * BinomialSigma(0.01, 10'000));
}

// Oracle: count test subsets by how many ones they hold (hypergeometric).
double HypergeometricTail(std::size_t n, std::size_t t, std::size_t ones, double nu) {
  using boost::math::binomial_coefficient;
  double hits = 0.0;
  for (std::size_t s = 0; s <= std::min(t, ones); ++s) {
    if (t - s > n - ones) continue;
    const double gap = std::abs(static_cast<double>(ones - s) / static_cast<double>(n - t) -
                                static_cast<double>(s) / static_cast<double>(t));
    if (gap >= nu) {
      hits += binomial_coefficient<double>(static_cast<unsigned>(ones), static_cast<unsigned>(s)) *
              binomial_coefficient<double>(static_cast<unsigned>(n - ones),
                                           static_cast<unsigned>(t - s));
    }
  }
  return hits / binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(t));
}

TEST(PartitionDeviationTest, ExhaustiveMatchesCountingOracle) {
  const std::vector<std::uint8_t> flags{1, 0, 1, 1, 0, 1, 1, 0, 1, 0};
  for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double exact = ExactPartitionDeviation(0.5, flags, nu);
    EXPECT_EQ(exact, HypergeometricTail(10, 5, 6, nu)) << nu;
    const double sampled = EmpiricalPartitionDeviation(0.5, flags, nu, 20'000, SeedKey(7));
    EXPECT_NEAR(sampled, exact, 3 * BinomialSigma(exact, 20'000) + 1e-12) << nu;
  }
  // Unbalanced split: 3 of 10 in the test set.
  EXPECT_EQ(ExactPartitionDeviation(0.3, flags, 0.25), HypergeometricTail(10, 3, 6, 0.25));
}

TEST(PartitionDeviationTest, InvalidInputs) {
  const std::vector<std::uint8_t> flags{1, 0, 2};
  EXPECT_THROW(ExactPartitionDeviation(0.5, flags, 0.1), InvalidParameter);
  EXPECT_THROW(ExactPartitionDeviation(0.5, std::vector<std::uint8_t>(26, 1), 0.1),
               InvalidParameter);
  EXPECT_THROW(EmpiricalPartitionDeviation(0.5, std::vector<std::uint8_t>(1, 1), 0.1, 10, SeedKey(1)),
               InvalidParameter);
  EXPECT_THROW(EmpiricalPartitionDeviation(0.5, std::vector<std::uint8_t>(10, 1), 0.1, 0, SeedKey(1)),
               InvalidParameter);
}

}  // namespace
}  // namespace qpqsim
