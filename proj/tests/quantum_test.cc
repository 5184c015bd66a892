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

#include "qpqsim/quantum.h"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "qpqsim/error.h"
#include "test_util.h"

namespace qpqsim {
namespace {

using testing::ChiSquarePValue;
using testing::kPi;

constexpr double kTol = 1e-12;

TEST(QubitTest, FromAngleExamples) {
  const Qubit zero = Qubit::FromAngle(0.0);
  EXPECT_DOUBLE_EQ(zero.amp0().real(), 1.0);
  EXPECT_DOUBLE_EQ(zero.amp1().real(), 0.0);

  const Qubit one = Qubit::FromAngle(kPi);
  EXPECT_NEAR(std::abs(one.amp0()), 0.0, kTol);
  EXPECT_NEAR(one.amp1().real(), 1.0, kTol);

  const Qubit plus = Qubit::FromAngle(kPi / 2);
  EXPECT_NEAR(plus.amp0().real(), 1.0 / std::sqrt(2.0), kTol);
  EXPECT_NEAR(plus.amp1().real(), 1.0 / std::sqrt(2.0), kTol);
}

TEST(QubitTest, RejectsNonFiniteAndUnnormalized) {
  EXPECT_THROW(Qubit::FromAngle(std::numeric_limits<double>::quiet_NaN()), InvalidParameter);
  EXPECT_THROW(Qubit::FromAngle(std::numeric_limits<double>::infinity()), InvalidParameter);
  EXPECT_THROW(Qubit(1.0, 1.0), InvalidParameter);
  EXPECT_THROW(Qubit(Amplitude(std::numeric_limits<double>::quiet_NaN(), 0.0), 0.0),
               InvalidParameter);
}

TEST(MeasurementBasisTest, ComputationalFromZeroAngle) {
  const MeasurementBasis b = MeasurementBasis::FromAngle(0.0);
  EXPECT_NEAR(b.plus().amp0().real(), 1.0, kTol);
  EXPECT_NEAR(b.minus().amp1().real(), -1.0, kTol);
  EXPECT_NEAR(std::abs(b.plus().Overlap(b.minus())), 0.0, kTol);
}

TEST(MeasurementBasisTest, HadamardIsOrthonormal) {
  const MeasurementBasis b = MeasurementBasis::FromAngle(kPi / 2);
  EXPECT_NEAR(std::abs(b.plus().Overlap(b.minus())), 0.0, kTol);
  const MeasurementBasis h = MeasurementBasis::Hadamard();
  EXPECT_NEAR(std::abs(h.plus().Overlap(b.plus()) - 1.0), 0.0, kTol);
  EXPECT_NEAR(std::abs(h.minus().Overlap(b.minus()) - 1.0), 0.0, kTol);
}

TEST(MeasurementBasisTest, RejectsNonOrthogonalPair) {
  EXPECT_THROW(MeasurementBasis(Qubit::FromAngle(0.0), Qubit::FromAngle(0.3)), InvalidParameter);
}

TEST(MeasurementBasisTest, PhiOverlapIsCosThetaOnGrid) {
  for (int i = 0; i < 100; ++i) {
    const double theta = (kPi / 2) * i / 99.0;
    const MeasurementBasis phi0 = MeasurementBasis::FromAngle(theta, BasisLabel::kPhi0);
    const MeasurementBasis phi1 = MeasurementBasis::FromAngle(-theta, BasisLabel::kPhi1);
    // Symbolic expansion: cos^2(t/2) - sin^2(t/2).
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Amplitude overlap = phi0.plus().Overlap(phi1.plus());
    EXPECT_NEAR(overlap.real(), c * c - s * s, kTol);
    EXPECT_NEAR(overlap.real(), std::cos(theta), kTol);
    EXPECT_NEAR(overlap.imag(), 0.0, kTol);
    EXPECT_NEAR(std::abs(phi0.plus().Overlap(phi0.minus())), 0.0, kTol);
    EXPECT_NEAR(std::abs(phi1.plus().Overlap(phi1.minus())), 0.0, kTol);
  }
}

TEST(SourceModelTest, DomainChecks) {
  EXPECT_THROW(SourceModel(0.3, 0.5), InvalidParameter);
  EXPECT_THROW(SourceModel(0.3, -0.5), InvalidParameter);
  EXPECT_THROW(SourceModel(2.0, 0.0), InvalidParameter);
  EXPECT_THROW(SourceModel(-0.1, 0.0), InvalidParameter);
  // 1.5708 is pi/2 to four decimals; snapped onto the bound.
  EXPECT_DOUBLE_EQ(SourceModel(1.5708, 0.0).theta(), kPi / 2);
  const SourceModel skewed(0.4, 0.2);
  EXPECT_NEAR(skewed.alpha() * skewed.alpha() + skewed.beta() * skewed.beta(), 1.0, kTol);
}

TEST(EntangledSourceStateTest, HonestHadamardCase) {
  const TwoQubitState s = EntangledSourceState(SourceModel::Honest(kPi / 2));
  // (|0>|+> + |1>|->)/sqrt(2) expanded by hand.
  const std::array<double, 4> expected{0.5, 0.5, 0.5, -0.5};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.amps()[i].real(), expected[i], kTol);
    EXPECT_NEAR(s.amps()[i].imag(), 0.0, kTol);
  }
}

TEST(EntangledSourceStateTest, ProductCaseAtThetaZero) {
  const TwoQubitState s = EntangledSourceState(SourceModel::Honest(0.0));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s.amp(0, 0).real(), r, kTol);
  EXPECT_NEAR(std::abs(s.amp(0, 1)), 0.0, kTol);
  EXPECT_NEAR(s.amp(1, 0).real(), r, kTol);
  EXPECT_NEAR(std::abs(s.amp(1, 1)), 0.0, kTol);
}

TEST(EntangledSourceStateTest, NearlyFullSkew) {
  const TwoQubitState s = EntangledSourceState(SourceModel(0.7, 0.499999));
  EXPECT_NEAR(std::norm(s.amp(1, 0)) + std::norm(s.amp(1, 1)), 1e-6, 1e-12);
}

TEST(JointOutcomeTest, TableEntries) {
  const double theta = kPi / 2;
  const double psi1 = kPi / 4;
  const TwoQubitState s = EntangledSourceState(SourceModel::Honest(theta));
  const MeasurementBasis psi = MeasurementBasis::FromAngle(psi1, BasisLabel::kPsi1);

  const JointDistribution comp = JointOutcomeProbabilities(s, MeasurementBasis::Computational(), psi);
  EXPECT_NEAR(comp[PairIndex(0, 0)], 0.5 * std::pow(std::cos((theta - psi1) / 2), 2), 1e-12);
  EXPECT_NEAR(comp[PairIndex(0, 0)], 0.4267766952966369, 1e-12);

  const JointDistribution had = JointOutcomeProbabilities(s, MeasurementBasis::Hadamard(), psi);
  EXPECT_NEAR(had[PairIndex(0, 0)],
              std::pow(std::cos(theta / 2), 2) * std::pow(std::cos(psi1 / 2), 2), 1e-12);
}

TEST(JointOutcomeTest, NormalizationAndPhaseInvariance) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  std::uniform_real_distribution<double> theta_dist(0.0, kPi / 2);
  std::uniform_real_distribution<double> eps_dist(-0.49, 0.49);
  for (int trial = 0; trial < 200; ++trial) {
    const TwoQubitState s = EntangledSourceState(SourceModel(theta_dist(gen), eps_dist(gen)));
    const MeasurementBasis b1 = MeasurementBasis::FromAngle(angle(gen));
    const MeasurementBasis b2 = MeasurementBasis::FromAngle(angle(gen));
    const JointDistribution p = JointOutcomeProbabilities(s, b1, b2);
    EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, kProbabilityTolerance);

    const MeasurementBasis b1_phased(b1.plus().WithPhase(angle(gen)), b1.minus().WithPhase(angle(gen)));
    const MeasurementBasis b2_phased(b2.plus().WithPhase(angle(gen)), b2.minus().WithPhase(angle(gen)));
    const JointDistribution q = JointOutcomeProbabilities(s, b1_phased, b2_phased);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(MeasurePairTest, HonestMarginalOfFirstQubit) {
  const TwoQubitState s = EntangledSourceState(SourceModel::Honest(kPi / 2));
  const MeasurementBasis comp = MeasurementBasis::Computational();
  const MeasurementBasis phi0 = MeasurementBasis::FromAngle(kPi / 2);
  RandomStream rng = SeedKey(1).Stream();
  constexpr int kDraws = 1'000'000;
  int ones = 0;
  for (int i = 0; i < kDraws; ++i) ones += MeasurePair(s, comp, phi0, rng).first;
  EXPECT_NEAR(static_cast<double>(ones) / kDraws, 0.5, 3 * 0.0005);
}

TEST(MeasurePairTest, EigenstateOutcomeIsDeterministic) {
  const TwoQubitState s = EntangledSourceState(SourceModel::Honest(0.0));
  const MeasurementBasis phi0 = MeasurementBasis::FromAngle(0.0, BasisLabel::kPhi0);
  RandomStream rng = SeedKey(2).Stream();
  for (int i = 0; i < 10000; ++i) {
    EXPECT_EQ(MeasurePair(s, MeasurementBasis::Hadamard(), phi0, rng).second, 0);
  }
}

TEST(MeasurePairTest, MatchesBornRuleChiSquare) {
  const TwoQubitState s = EntangledSourceState(SourceModel(1.1, 0.15));
  const MeasurementBasis b1 = MeasurementBasis::FromAngle(0.4);
  const MeasurementBasis b2 = MeasurementBasis::FromAngle(2.2);
  const JointDistribution p = JointOutcomeProbabilities(s, b1, b2);
  RandomStream rng = SeedKey(3).Stream();
  std::array<std::uint64_t, 4> counts{};
  for (int i = 0; i < 100'000; ++i) {
    const OutcomePair o = MeasurePair(s, b1, b2, rng);
    ++counts[PairIndex(o.first, o.second)];
  }
  EXPECT_GT(ChiSquarePValue(counts, p), 0.001);
}

// Independent sampler: measure the first qubit from its marginal, collapse,
// then measure the second qubit on the conditional state.
OutcomePair SequentialMeasure(const TwoQubitState& s, const MeasurementBasis& b1,
                              const MeasurementBasis& b2, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<Amplitude, 2> post[2];
  double marginal[2];
  for (int a = 0; a < 2; ++a) {
    for (int j = 0; j < 2; ++j) {
      post[a][j] = std::conj(b1.element(a)[0]) * s.amp(0, j) + std::conj(b1.element(a)[1]) * s.amp(1, j);
    }
    marginal[a] = std::norm(post[a][0]) + std::norm(post[a][1]);
  }
  const int a = u(gen) < marginal[0] ? 0 : 1;
  const double scale = 1.0 / std::sqrt(marginal[a]);
  const Amplitude w0 = post[a][0] * scale;
  const Amplitude w1 = post[a][1] * scale;
  const double p_plus =
      std::norm(std::conj(b2.plus()[0]) * w0 + std::conj(b2.plus()[1]) * w1);
  const int b = u(gen) < p_plus ? 0 : 1;
  return {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)};
}

TEST(MeasurePairTest, SequentialCollapseAgreesWithJointRule) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> theta_dist(0.05, kPi / 2);
  std::uniform_real_distribution<double> eps_dist(-0.4, 0.4);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int set = 0; set < 5; ++set) {
    const TwoQubitState s = EntangledSourceState(SourceModel(theta_dist(gen), eps_dist(gen)));
    const MeasurementBasis b1 = MeasurementBasis::FromAngle(angle(gen));
    const MeasurementBasis b2 = MeasurementBasis::FromAngle(angle(gen));
    const JointDistribution p = JointOutcomeProbabilities(s, b1, b2);
    std::array<std::uint64_t, 4> counts{};
    for (int i = 0; i < 100'000; ++i) {
      const OutcomePair o = SequentialMeasure(s, b1, b2, gen);
      ++counts[PairIndex(o.first, o.second)];
    }
    EXPECT_GT(ChiSquarePValue(counts, p), 0.001) << "parameter set " << set;
  }
}

TEST(MeasurePairTest, DeterministicForFixedKey) {
  const TwoQubitState s = EntangledSourceState(SourceModel(0.9, -0.1));
  const MeasurementBasis b1 = MeasurementBasis::Hadamard();
  const MeasurementBasis b2 = MeasurementBasis::FromAngle(1.3);
  RandomStream r1 = SeedKey(42).Child(7).Stream();
  RandomStream r2 = SeedKey(42).Child(7).Stream();
  for (int i = 0; i < 1000; ++i) {
    const OutcomePair a = MeasurePair(s, b1, b2, r1);
    const OutcomePair b = MeasurePair(s, b1, b2, r2);
    ASSERT_EQ(a.first, b.first);
    ASSERT_EQ(a.second, b.second);
  }
}

TEST(SampleCellTest, NeverReturnsZeroProbabilityCell) {
  const JointDistribution dist{0.0, 0.7, 0.0, 0.3};
  RandomStream rng = SeedKey(5).Stream();
  for (int i = 0; i < 100000; ++i) {
    const int cell = SampleCell(dist, rng);
    ASSERT_TRUE(cell == 1 || cell == 3);
  }
}

TEST(SeedKeyTest, ChildrenAreDistinctAndStable) {
  const SeedKey root(7);
  EXPECT_NE(root.Child(0).value(), root.Child(1).value());
  EXPECT_EQ(root.Child(3).value(), SeedKey(7).Child(3).value());
  EXPECT_NE(root.Child(0).Child(1).value(), root.Child(1).Child(0).value());
}

}  // namespace
}  // namespace qpqsim
