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

#ifndef QPQSIM_ANALYTICS_H_
#define QPQSIM_ANALYTICS_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace qpqsim {

// Free parameters of the protocol: the source angle theta and the two
// second-particle test angles psi1, psi2 (radians).
class ProtocolAngles {
 public:
  // theta in [0, pi/2]; psi1, psi2 in [0, pi].
  ProtocolAngles(double theta, double psi1, double psi2);

  double theta() const { return theta_; }
  double psi1() const { return psi1_; }
  double psi2() const { return psi2_; }
  // psi1 for y == 0, psi2 for y == 1.
  double psi(int y) const { return y == 0 ? psi1_ : psi2_; }

 private:
  double theta_;
  double psi1_;
  double psi2_;
};

// Pr(a, b | x, y) for the honest source measured by the local CHSH test.
class ConditionalTable {
 public:
  static constexpr int Index(int x, int y, int a, int b) { return 8 * x + 4 * y + 2 * a + b; }

  explicit ConditionalTable(const std::array<double, 16>& entries);

  double at(int x, int y, int a, int b) const { return entries_[Index(x, y, a, b)]; }
  const std::array<double, 16>& entries() const { return entries_; }

 private:
  std::array<double, 16> entries_;
};

// Closed-form table: for x == 0 the rows are 1/2 cos^2 and 1/2 sin^2 of
// (theta -/+ psi)/2, for x == 1 they are products of cos^2/sin^2 of theta/2
// and psi/2.
ConditionalTable ComputeConditionalTable(const ProtocolAngles& angles);

// The CHSH predicate a xor b == x and y.
constexpr bool IsWinningCell(int x, int y, int a, int b) { return (a ^ b) == (x & y); }

// Expected local CHSH win probability
//   (1/8) [sin(theta) (sin psi1 + sin psi2) + cos psi1 - cos psi2] + 1/2.
// This value is also the abort threshold Bob compares his observed rate to.
double ChshWinProbability(const ProtocolAngles& angles);

// Alice's conclusive-and-correct rate against the honest source: sin^2(theta)/2.
double HonestSuccessProbability(double theta);

// Same rate when the source is epsilon-skewed and Alice biases her basis
// choice to match: (1/2 + 2 eps^2) sin^2(theta).
double BiasedSuccessProbability(double theta, double epsilon);

// Exact conclusive rate for an arbitrary (source skew, Alice basis bias) pair:
//   sin^2(theta) [(1/2 + eps_s)(1/2 + eps_a) + (1/2 - eps_s)(1/2 - eps_a)].
// Reduces to the two functions above on their diagonals.
double ConclusiveProbability(double theta, double source_epsilon, double alice_epsilon);

struct CurvePoint {
  double theta = 0.0;
  double win_probability = 0.0;
};

// Win probability along a theta grid, in grid order. Throws on an empty grid
// or any point outside [0, pi/2].
std::vector<CurvePoint> Figure1Curve(double psi1, double psi2, std::span<const double> theta_grid);

// `points` uniformly spaced values covering [0, pi/2] inclusive.
std::vector<double> UniformThetaGrid(std::size_t points = 256);

}  // namespace qpqsim

#endif  // QPQSIM_ANALYTICS_H_
