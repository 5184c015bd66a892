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

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "cli.h"
#include "json.hpp"
#include "qpqsim/analytics.h"
#include "qpqsim/chsh.h"
#include "qpqsim/qpq.h"
#include "qpqsim/report.h"

namespace qpqsim::cli {
namespace {

// Monte Carlo estimates are accepted within this many binomial standard errors.
constexpr double kSigmaBudget = 4.0;

struct Check {
  std::string name;
  double observed;
  double expected;
  double tolerance;
  bool ok() const { return std::abs(observed - expected) <= tolerance; }
};

double Sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

bool RunVerification(std::uint64_t seed, std::size_t rounds, unsigned threads, std::ostream& log,
                     std::string& json_report) {
  constexpr double kPi = std::numbers::pi;
  const SeedKey key(seed);
  const CampaignOptions options{threads, false};
  std::vector<Check> checks;

  const ProtocolAngles optimal(kPi / 2, kPi / 4, 3 * kPi / 4);
  {
    const ChshTestResult r = RunLocalTest(rounds, SourceModel::Honest(kPi / 2), optimal, 0.0, key.Child(0),
                                          options);
    const double p = ChshWinProbability(optimal);
    checks.push_back({"chsh_win_rate", r.win_rate, p, kSigmaBudget * Sigma(p, rounds)});
  }

  std::uint64_t child = 1;
  for (double theta : {kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}) {
    const KeyGenResult r = RunKeygen(rounds, 0.0, SourceModel::Honest(theta), AliceStrategy::Honest(),
                                     key.Child(child++), options);
    const double p = HonestSuccessProbability(theta);
    char name[64];
    std::snprintf(name, sizeof(name), "honest_rate_theta_%.4f", theta);
    checks.push_back({name, static_cast<double>(r.correct_count) / static_cast<double>(rounds), p,
                      kSigmaBudget * Sigma(p, rounds)});
    checks.push_back({std::string(name) + "_errors", static_cast<double>(r.conclusive_count - r.correct_count),
                      0.0, 0.0});
  }

  for (double eps : {0.1, 0.25, 0.4}) {
    const KeyGenResult r = RunKeygen(rounds, 0.0, SourceModel(kPi / 2, eps), AliceStrategy::Biased(eps),
                                     key.Child(child++), options);
    const double p = BiasedSuccessProbability(kPi / 2, eps);
    char name[64];
    std::snprintf(name, sizeof(name), "biased_rate_eps_%.2f", eps);
    checks.push_back({name, static_cast<double>(r.correct_count) / static_cast<double>(rounds), p,
                      kSigmaBudget * Sigma(p, rounds)});
  }

  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["seed"] = seed;
  doc["rounds"] = rounds;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (const Check& c : checks) {
    char line[160];
    std::snprintf(line, sizeof(line), "%s %-28s observed=%.6f expected=%.6f tol=%.6f\n",
                  c.ok() ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.expected, c.tolerance);
    log << line;
    all_ok = all_ok && c.ok();
    rows.push_back({{"name", c.name},
                    {"observed", c.observed},
                    {"expected", c.expected},
                    {"tolerance", c.tolerance},
                    {"pass", c.ok()}});
  }
  doc["checks"] = rows;
  doc["pass"] = all_ok;
  json_report = doc.dump(2) + "\n";
  return all_ok;
}

}  // namespace qpqsim::cli
