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

#ifndef QPQSIM_QUANTUM_H_
#define QPQSIM_QUANTUM_H_

#include <array>
#include <complex>
#include <cstdint>

#include "qpqsim/random.h"

namespace qpqsim {

using Amplitude = std::complex<double>;

inline constexpr double kConstructionTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-10;
// Range-checked angles may overshoot their interval by this much (e.g. pi/2
// typed as 1.5708); such values are snapped onto the bound.
inline constexpr double kAngleTolerance = 1e-5;

// Returns angle clamped into [lo, hi]; throws InvalidParameter if it is not
// finite or lies more than kAngleTolerance outside the interval.
double SnapAngle(double angle, double lo, double hi, const char* what);

// Normalized single-qubit pure state amp0|0> + amp1|1>.
class Qubit {
 public:
  // Throws InvalidParameter unless both amplitudes are finite and the norm is
  // one within kConstructionTolerance.
  Qubit(Amplitude amp0, Amplitude amp1);

  // cos(angle/2)|0> + sin(angle/2)|1>.
  static Qubit FromAngle(double angle);

  Amplitude amp0() const { return amp0_; }
  Amplitude amp1() const { return amp1_; }
  Amplitude operator[](int i) const { return i == 0 ? amp0_ : amp1_; }

  // <this|other>
  Amplitude Overlap(const Qubit& other) const;
  Qubit WithPhase(double phase) const;

 private:
  Amplitude amp0_;
  Amplitude amp1_;
};

enum class BasisLabel { kComputational, kHadamard, kPhi0, kPhi1, kPsi1, kPsi2, kCustom };

const char* ToString(BasisLabel label);

// Orthonormal pair {plus, minus}. Measuring "plus" is reported as outcome bit
// 0 and "minus" as outcome bit 1.
class MeasurementBasis {
 public:
  MeasurementBasis(Qubit plus, Qubit minus, BasisLabel label = BasisLabel::kCustom);

  // plus = cos(a/2)|0> + sin(a/2)|1>, minus = sin(a/2)|0> - cos(a/2)|1>.
  static MeasurementBasis FromAngle(double angle, BasisLabel label = BasisLabel::kCustom);
  static MeasurementBasis Computational();
  static MeasurementBasis Hadamard();

  const Qubit& plus() const { return plus_; }
  const Qubit& minus() const { return minus_; }
  const Qubit& element(int outcome) const { return outcome == 0 ? plus_ : minus_; }
  BasisLabel label() const { return label_; }

 private:
  Qubit plus_;
  Qubit minus_;
  BasisLabel label_;
};

// Skewed entangled source sqrt(1/2+eps)|0>|phi0> + sqrt(1/2-eps)|1>|phi1>
// with |phi0> = FromAngle(theta), |phi1> = FromAngle(-theta).
class SourceModel {
 public:
  // theta in [0, pi/2], epsilon in (-1/2, 1/2).
  SourceModel(double theta, double epsilon);
  static SourceModel Honest(double theta) { return SourceModel(theta, 0.0); }

  double theta() const { return theta_; }
  double epsilon() const { return epsilon_; }
  double alpha() const;
  double beta() const;

 private:
  double theta_;
  double epsilon_;
};

// Outcome index for a pair of bits: 2 * first + second.
constexpr int PairIndex(int first, int second) { return 2 * first + second; }

using JointDistribution = std::array<double, 4>;

// Pure two-qubit state, amplitudes ordered 00, 01, 10, 11 (first qubit is the
// high bit).
class TwoQubitState {
 public:
  explicit TwoQubitState(const std::array<Amplitude, 4>& amps);

  static TwoQubitState Product(const Qubit& first, const Qubit& second);

  Amplitude amp(int first, int second) const { return amps_[PairIndex(first, second)]; }
  const std::array<Amplitude, 4>& amps() const { return amps_; }

 private:
  std::array<Amplitude, 4> amps_;
};

TwoQubitState EntangledSourceState(const SourceModel& source);

// p(u, v) = |<e_u (x) f_v | state>|^2, indexed by PairIndex(u, v).
JointDistribution JointOutcomeProbabilities(const TwoQubitState& state,
                                            const MeasurementBasis& first,
                                            const MeasurementBasis& second);

struct OutcomePair {
  std::uint8_t first = 0;
  std::uint8_t second = 0;
};

// Draws one cell of a four-outcome distribution with a single uniform.
// Cells with zero probability are never returned.
int SampleCell(const JointDistribution& dist, RandomStream& rng);

OutcomePair MeasurePair(const TwoQubitState& state, const MeasurementBasis& first,
                        const MeasurementBasis& second, RandomStream& rng);

}  // namespace qpqsim

#endif  // QPQSIM_QUANTUM_H_
