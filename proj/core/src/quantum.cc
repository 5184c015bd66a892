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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qpqsim/error.h"

namespace qpqsim {
namespace {

bool IsFinite(Amplitude z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void RequireFinite(double value, const char* what) {
  if (!std::isfinite(value)) throw InvalidParameter(std::string(what) + " must be finite");
}

}  // namespace

Qubit::Qubit(Amplitude amp0, Amplitude amp1) : amp0_(amp0), amp1_(amp1) {
  if (!IsFinite(amp0) || !IsFinite(amp1)) throw InvalidParameter("qubit amplitudes must be finite");
  const double norm = std::norm(amp0) + std::norm(amp1);
  if (std::abs(norm - 1.0) > kConstructionTolerance) {
    throw InvalidParameter("qubit is not normalized (norm^2 = " + std::to_string(norm) + ")");
  }
}

Qubit Qubit::FromAngle(double angle) {
  RequireFinite(angle, "qubit angle");
  return Qubit(std::cos(angle / 2), std::sin(angle / 2));
}

Amplitude Qubit::Overlap(const Qubit& other) const {
  return std::conj(amp0_) * other.amp0_ + std::conj(amp1_) * other.amp1_;
}

Qubit Qubit::WithPhase(double phase) const {
  const Amplitude u = std::polar(1.0, phase);
  return Qubit(u * amp0_, u * amp1_);
}

const char* ToString(BasisLabel label) {
  switch (label) {
    case BasisLabel::kComputational: return "computational";
    case BasisLabel::kHadamard: return "hadamard";
    case BasisLabel::kPhi0: return "phi0";
    case BasisLabel::kPhi1: return "phi1";
    case BasisLabel::kPsi1: return "psi1";
    case BasisLabel::kPsi2: return "psi2";
    case BasisLabel::kCustom: return "custom";
  }
  return "unknown";
}

MeasurementBasis::MeasurementBasis(Qubit plus, Qubit minus, BasisLabel label)
    : plus_(plus), minus_(minus), label_(label) {
  if (std::abs(plus_.Overlap(minus_)) > kConstructionTolerance) {
    throw InvalidParameter("basis elements are not orthogonal");
  }
}

MeasurementBasis MeasurementBasis::FromAngle(double angle, BasisLabel label) {
  RequireFinite(angle, "basis angle");
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  return MeasurementBasis(Qubit(c, s), Qubit(s, -c), label);
}

MeasurementBasis MeasurementBasis::Computational() {
  return MeasurementBasis(Qubit(1.0, 0.0), Qubit(0.0, -1.0), BasisLabel::kComputational);
}

MeasurementBasis MeasurementBasis::Hadamard() {
  const double r = std::sqrt(0.5);
  return MeasurementBasis(Qubit(r, r), Qubit(r, -r), BasisLabel::kHadamard);
}

double SnapAngle(double angle, double lo, double hi, const char* what) {
  RequireFinite(angle, what);
  if (angle < lo - kAngleTolerance || angle > hi + kAngleTolerance) {
    throw InvalidParameter(std::string(what) + " out of range");
  }
  return std::clamp(angle, lo, hi);
}

SourceModel::SourceModel(double theta, double epsilon)
    : theta_(SnapAngle(theta, 0.0, std::numbers::pi / 2, "theta")), epsilon_(epsilon) {
  RequireFinite(epsilon, "epsilon");
  if (!(epsilon > -0.5 && epsilon < 0.5)) {
    throw InvalidParameter("source epsilon must lie in (-1/2, 1/2)");
  }
}

double SourceModel::alpha() const { return std::sqrt(0.5 + epsilon_); }
double SourceModel::beta() const { return std::sqrt(0.5 - epsilon_); }

TwoQubitState::TwoQubitState(const std::array<Amplitude, 4>& amps) : amps_(amps) {
  double norm = 0.0;
  for (const Amplitude& a : amps_) {
    if (!IsFinite(a)) throw InvalidParameter("state amplitudes must be finite");
    norm += std::norm(a);
  }
  if (std::abs(norm - 1.0) > kConstructionTolerance) {
    throw InvalidParameter("two-qubit state is not normalized");
  }
}

TwoQubitState TwoQubitState::Product(const Qubit& first, const Qubit& second) {
  return TwoQubitState({first[0] * second[0], first[0] * second[1], first[1] * second[0],
                        first[1] * second[1]});
}

TwoQubitState EntangledSourceState(const SourceModel& source) {
  const Qubit phi0 = Qubit::FromAngle(source.theta());
  const Qubit phi1 = Qubit::FromAngle(-source.theta());
  const double a = source.alpha();
  const double b = source.beta();
  return TwoQubitState({a * phi0[0], a * phi0[1], b * phi1[0], b * phi1[1]});
}

JointDistribution JointOutcomeProbabilities(const TwoQubitState& state,
                                            const MeasurementBasis& first,
                                            const MeasurementBasis& second) {
  JointDistribution p{};
  for (int u = 0; u < 2; ++u) {
    const Qubit& e = first.element(u);
    for (int v = 0; v < 2; ++v) {
      const Qubit& f = second.element(v);
      Amplitude overlap = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          overlap += std::conj(e[i]) * std::conj(f[j]) * state.amp(i, j);
        }
      }
      p[PairIndex(u, v)] = std::norm(overlap);
    }
  }
  return p;
}

int SampleCell(const JointDistribution& dist, RandomStream& rng) {
  const double u = rng.Uniform();
  double cumulative = 0.0;
  int last_nonzero = 0;
  for (int cell = 0; cell < 4; ++cell) {
    if (dist[cell] <= 0.0) continue;
    last_nonzero = cell;
    cumulative += dist[cell];
    if (u < cumulative) return cell;
  }
  // Rounding left u just above the accumulated total.
  return last_nonzero;
}

OutcomePair MeasurePair(const TwoQubitState& state, const MeasurementBasis& first,
                        const MeasurementBasis& second, RandomStream& rng) {
  const int cell = SampleCell(JointOutcomeProbabilities(state, first, second), rng);
  return {static_cast<std::uint8_t>(cell >> 1), static_cast<std::uint8_t>(cell & 1)};
}

}  // namespace qpqsim
