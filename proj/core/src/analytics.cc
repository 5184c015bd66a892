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

#include "qpqsim/analytics.h"

#include <cmath>
#include <numbers>

#include "qpqsim/error.h"
#include "qpqsim/quantum.h"

namespace qpqsim {
namespace {

constexpr double kPi = std::numbers::pi;

double Cos2(double x) {
  const double c = std::cos(x);
  return c * c;
}

double Sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

}  // namespace

ProtocolAngles::ProtocolAngles(double theta, double psi1, double psi2)
    : theta_(SnapAngle(theta, 0.0, kPi / 2, "theta")),
      psi1_(SnapAngle(psi1, 0.0, kPi, "psi1")),
      psi2_(SnapAngle(psi2, 0.0, kPi, "psi2")) {}

ConditionalTable::ConditionalTable(const std::array<double, 16>& entries) : entries_(entries) {
  for (double p : entries_) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("table entry outside [0, 1]");
  }
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double row = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) row += at(x, y, a, b);
      }
      if (std::abs(row - 1.0) > kProbabilityTolerance) {
        throw InvalidParameter("conditional table row does not sum to one");
      }
    }
  }
}

ConditionalTable ComputeConditionalTable(const ProtocolAngles& angles) {
  const double theta = angles.theta();
  std::array<double, 16> t{};
  for (int y = 0; y < 2; ++y) {
    const double psi = angles.psi(y);
    // x = 0: Bob's first particle in {|0>, |1>}.
    t[ConditionalTable::Index(0, y, 0, 0)] = 0.5 * Cos2((theta - psi) / 2);
    t[ConditionalTable::Index(0, y, 0, 1)] = 0.5 * Sin2((theta - psi) / 2);
    t[ConditionalTable::Index(0, y, 1, 0)] = 0.5 * Cos2((theta + psi) / 2);
    t[ConditionalTable::Index(0, y, 1, 1)] = 0.5 * Sin2((theta + psi) / 2);
    // x = 1: Bob's first particle in {|+>, |->}.
    t[ConditionalTable::Index(1, y, 0, 0)] = Cos2(theta / 2) * Cos2(psi / 2);
    t[ConditionalTable::Index(1, y, 0, 1)] = Cos2(theta / 2) * Sin2(psi / 2);
    t[ConditionalTable::Index(1, y, 1, 0)] = Sin2(theta / 2) * Sin2(psi / 2);
    t[ConditionalTable::Index(1, y, 1, 1)] = Sin2(theta / 2) * Cos2(psi / 2);
  }
  return ConditionalTable(t);
}

double ChshWinProbability(const ProtocolAngles& angles) {
  const double psi1 = angles.psi1();
  const double psi2 = angles.psi2();
  return (std::sin(angles.theta()) * (std::sin(psi1) + std::sin(psi2)) + std::cos(psi1) -
          std::cos(psi2)) / 8.0 +
         0.5;
}

double HonestSuccessProbability(double theta) {
  theta = SnapAngle(theta, 0.0, kPi / 2, "theta");
  return Sin2(theta) / 2;
}

double BiasedSuccessProbability(double theta, double epsilon) {
  theta = SnapAngle(theta, 0.0, kPi / 2, "theta");
  if (!(epsilon > -0.5 && epsilon < 0.5)) throw InvalidParameter("epsilon must lie in (-1/2, 1/2)");
  return (0.5 + 2 * epsilon * epsilon) * Sin2(theta);
}

double ConclusiveProbability(double theta, double source_epsilon, double alice_epsilon) {
  theta = SnapAngle(theta, 0.0, kPi / 2, "theta");
  if (!(source_epsilon > -0.5 && source_epsilon < 0.5) ||
      !(alice_epsilon > -0.5 && alice_epsilon < 0.5)) {
    throw InvalidParameter("epsilon must lie in (-1/2, 1/2)");
  }
  // Bob 0 with prob 1/2 + eps_s, then Alice needs {phi1}; Bob 1 needs {phi0}.
  return Sin2(theta) * ((0.5 + source_epsilon) * (0.5 + alice_epsilon) +
                        (0.5 - source_epsilon) * (0.5 - alice_epsilon));
}

std::vector<CurvePoint> Figure1Curve(double psi1, double psi2, std::span<const double> theta_grid) {
  if (theta_grid.empty()) throw InvalidParameter("theta grid must not be empty");
  std::vector<CurvePoint> curve;
  curve.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    const ProtocolAngles angles(theta, psi1, psi2);
    curve.push_back({angles.theta(), ChshWinProbability(angles)});
  }
  return curve;
}

std::vector<double> UniformThetaGrid(std::size_t points) {
  if (points < 2) throw InvalidParameter("theta grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = (kPi / 2) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.back() = kPi / 2;
  return grid;
}

}  // namespace qpqsim
