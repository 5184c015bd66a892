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

#include "cli.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpqsim/analytics.h"
#include "qpqsim/bounds.h"
#include "qpqsim/chsh.h"
#include "qpqsim/error.h"
#include "qpqsim/qpq.h"
#include "qpqsim/report.h"

namespace qpqsim::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kOutputDirEnv = "QPQSIM_OUTPUT_DIR";

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double ParseNumber(std::string_view text, std::string_view whole) {
  if (text.empty()) throw InvalidParameter("malformed angle '" + std::string(whole) + "'");
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(value)) {
    throw InvalidParameter("malformed angle '" + std::string(whole) + "'");
  }
  return value;
}

// Where a report goes besides stdout: --out, else $QPQSIM_OUTPUT_DIR/<name>.
std::optional<std::filesystem::path> ReportPath(const std::string& out_flag,
                                                const std::string& default_name) {
  if (!out_flag.empty()) return std::filesystem::path(out_flag);
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / default_name;
  }
  return std::nullopt;
}

void Emit(const std::string& contents, const std::string& out_flag, const std::string& default_name,
          std::ostream& out) {
  out << contents;
  if (auto path = ReportPath(out_flag, default_name)) WriteFileAtomically(*path, contents);
}

std::vector<double> ParseNumberList(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = Trim(text.substr(start, comma - start));
    values.push_back(ParseNumber(item, text));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

struct AngleFlags {
  std::string theta = "pi/2";
  std::string psi1 = "pi/4";
  std::string psi2 = "3pi/4";

  void Register(CLI::App* cmd, bool with_psi) {
    cmd->add_option("--theta", theta, "Source angle theta in [0, pi/2] (radians or pi-expression)")
        ->capture_default_str();
    if (with_psi) {
      cmd->add_option("--psi1", psi1, "Test angle psi1 in [0, pi]")->capture_default_str();
      cmd->add_option("--psi2", psi2, "Test angle psi2 in [0, pi]")->capture_default_str();
    }
  }
  ProtocolAngles Angles() const {
    return ProtocolAngles(ParseAngle(theta), ParseAngle(psi1), ParseAngle(psi2));
  }
};

}  // namespace

double ParseAngle(std::string_view raw) {
  const std::string text = Trim(raw);
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(c)));
  }
  if (s.empty()) throw InvalidParameter("empty angle");

  std::string_view rest = s;
  double sign = 1.0;
  if (rest.front() == '+' || rest.front() == '-') {
    if (rest.front() == '-') sign = -1.0;
    rest.remove_prefix(1);
  }

  std::string_view numerator = rest;
  std::string_view denominator;
  if (const std::size_t slash = rest.find('/'); slash != std::string_view::npos) {
    numerator = rest.substr(0, slash);
    denominator = rest.substr(slash + 1);
    if (denominator.empty()) throw InvalidParameter("malformed angle '" + text + "'");
  }

  double value = 0.0;
  if (const std::size_t pi = numerator.find("pi"); pi != std::string_view::npos) {
    if (pi + 2 != numerator.size()) throw InvalidParameter("malformed angle '" + text + "'");
    std::string_view coefficient = numerator.substr(0, pi);
    if (!coefficient.empty() && coefficient.back() == '*') coefficient.remove_suffix(1);
    value = (coefficient.empty() ? 1.0 : ParseNumber(coefficient, text)) * std::numbers::pi;
  } else {
    value = ParseNumber(numerator, text);
  }
  if (!denominator.empty()) {
    const double d = ParseNumber(denominator, text);
    if (d == 0.0) throw InvalidParameter("division by zero in angle '" + text + "'");
    value /= d;
  }
  return sign * value;
}

std::vector<std::pair<double, double>> ParseAnglePairs(std::string_view text) {
  std::vector<std::pair<double, double>> pairs;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidParameter("angle pair '" + std::string(item) + "' must look like psi1:psi2");
    }
    pairs.emplace_back(ParseAngle(item.substr(0, colon)), ParseAngle(item.substr(colon + 1)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return pairs;
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and analysis toolkit for device-independent quantum private query"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  // Flags shared by several commands.
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_flag;
  double source_epsilon = 0.0;
  double alice_bias = 0.0;
  std::optional<double> slack;
  std::optional<double> eps_chsh;
  double eps_qpq = 1e-6;

  auto add_common = [&](CLI::App* cmd, bool needs_seed) {
    if (needs_seed) cmd->add_option("--seed", seed, "Master random seed")->required();
    cmd->add_option("--threads", threads, "Worker thread cap (0 = all cores)")->capture_default_str();
    cmd->add_option("--out", out_flag, "Also write the report to this file (atomically)");
  };

  // chsh
  AngleFlags chsh_angles;
  std::size_t chsh_rounds = 0;
  CLI::App* chsh = app.add_subcommand("chsh", "Run a local CHSH certification campaign");
  chsh_angles.Register(chsh, true);
  chsh->add_option("--epsilon", source_epsilon, "Source skew epsilon in (-1/2, 1/2)")->capture_default_str();
  chsh->add_option("--rounds", chsh_rounds, "Number of test rounds")->required();
  auto* chsh_slack = chsh->add_option("--slack", slack, "Abort slack delta (default 0)");
  chsh->add_option("--eps-chsh", eps_chsh, "Derive the slack from this failure probability")
      ->excludes(chsh_slack);
  add_common(chsh, true);

  // qpq
  AngleFlags qpq_angles;
  std::size_t qpq_rounds = 0;
  double loss = 0.0;
  std::size_t dilution_k = 1;
  bool emit_keys = false;
  CLI::App* qpq = app.add_subcommand("qpq", "Run QPQ key generation (and optional dilution)");
  qpq_angles.Register(qpq, false);
  qpq->add_option("--epsilon", source_epsilon, "Source skew epsilon")->capture_default_str();
  qpq->add_option("--alice-bias", alice_bias, "Alice's basis bias (0 = honest)")->capture_default_str();
  qpq->add_option("--rounds", qpq_rounds, "Number of transmitted pairs")->required();
  qpq->add_option("--loss", loss, "Per-pair loss probability in [0, 1)")->capture_default_str();
  qpq->add_option("--k", dilution_k, "Dilution factor")->capture_default_str();
  qpq->add_flag("--emit-keys", emit_keys, "Include raw key strings in the report");
  add_common(qpq, true);

  // attack
  AngleFlags attack_angles;
  std::string attack_eps = "0.1,0.25,0.4";
  std::size_t attack_rounds = 1'000'000;
  CLI::App* attack = app.add_subcommand("attack", "Sweep the biased-basis attack over source skews");
  attack_angles.Register(attack, false);
  attack->add_option("--eps-list", attack_eps, "Comma-separated skews, used for source and Alice")
      ->capture_default_str();
  attack->add_option("--rounds", attack_rounds, "Rounds per setting")->capture_default_str();
  add_common(attack, true);

  // protocol
  AngleFlags protocol_angles;
  std::size_t protocol_n = 0;
  double gamma = 0.5;
  std::string database_file;
  std::string database_bits;
  std::size_t database_random = 0;
  std::optional<std::size_t> target_index;
  CLI::App* protocol = app.add_subcommand("protocol", "Run the full protocol: test, keygen, query");
  protocol_angles.Register(protocol, true);
  protocol->add_option("--n", protocol_n, "Total number of entangled pairs")->required();
  protocol->add_option("--gamma", gamma, "Fraction of pairs used for the CHSH test")->capture_default_str();
  protocol->add_option("--epsilon", source_epsilon, "Source skew epsilon")->capture_default_str();
  protocol->add_option("--alice-bias", alice_bias, "Alice's basis bias")->capture_default_str();
  protocol->add_option("--k", dilution_k, "Dilution factor")->capture_default_str();
  protocol->add_option("--loss", loss, "Per-pair loss probability")->capture_default_str();
  auto* db_file = protocol->add_option("--database", database_file, "Database file of '0'/'1' lines");
  auto* db_bits = protocol->add_option("--database-bits", database_bits, "Database given inline")
                      ->excludes(db_file);
  protocol->add_option("--database-random", database_random, "Random database of this length")
      ->excludes(db_file)
      ->excludes(db_bits);
  protocol->add_option("--target", target_index, "Database index to query (default random)");
  auto* protocol_slack = protocol->add_option("--slack", slack, "Abort slack delta");
  protocol->add_option("--eps-chsh", eps_chsh, "Derive the slack from Chernoff with this epsilon")
      ->excludes(protocol_slack);
  protocol->add_option("--eps-qpq", eps_qpq, "Reported transfer epsilon")->capture_default_str();
  add_common(protocol, true);

  // figure1
  std::string pairs = "pi/4:3pi/4,3pi/16:13pi/16,9pi/32:23pi/32";
  std::size_t grid_points = 256;
  int digits = 6;
  CLI::App* figure1 = app.add_subcommand("figure1", "Win probability curves against theta (CSV)");
  figure1->add_option("--pairs", pairs, "psi1:psi2 pairs, comma separated")->capture_default_str();
  figure1->add_option("--grid", grid_points, "Uniform theta grid size on [0, pi/2]")->capture_default_str();
  figure1->add_option("--digits", digits, "Decimal digits in the CSV")->capture_default_str();
  add_common(figure1, false);

  // table1
  AngleFlags table_angles;
  std::size_t table_rounds = 0;
  CLI::App* table1 = app.add_subcommand("table1", "Conditional probability table (CSV)");
  table_angles.Register(table1, true);
  table1->add_option("--rounds", table_rounds, "Also estimate the table from this many rounds");
  table1->add_option("--seed", seed, "Seed for the empirical estimate");
  table1->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
  table1->add_option("--out", out_flag, "Also write the report to this file");

  // bounds
  BoundsParams bounds_params;
  CLI::App* bounds = app.add_subcommand("bounds", "Finite-statistics deviations delta and nu");
  bounds->add_option("--gamma", bounds_params.gamma, "Test fraction gamma")->required();
  bounds->add_option("--n", bounds_params.n, "Total number of pairs")->required();
  bounds->add_option("--eps-chsh", bounds_params.epsilon_chsh, "epsilon_CHSH")->required();
  bounds->add_option("--eps-qpq", bounds_params.epsilon_qpq, "epsilon_QPQ")->required();
  bounds->add_option("--out", out_flag, "Also write the report to this file");

  // verify
  std::size_t verify_rounds = 200'000;
  CLI::App* verify = app.add_subcommand("verify", "Run quick Monte Carlo checks against the closed forms");
  verify->add_option("--rounds", verify_rounds, "Rounds per Monte Carlo check")->capture_default_str();
  verify->add_option("--seed", seed, "Master random seed")->capture_default_str();
  verify->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
  verify->add_option("--out", out_flag, "Also write the JSON summary to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const SeedKey key(seed);
    const auto require_positive = [](std::size_t v, const char* what) {
      if (v == 0) throw InvalidParameter(std::string(what) + " must be positive");
    };

    if (chsh->parsed()) {
      require_positive(chsh_rounds, "--rounds");
      const ProtocolAngles angles = chsh_angles.Angles();
      double delta = slack.value_or(0.0);
      if (eps_chsh) {
        if (!(*eps_chsh > 0.0 && *eps_chsh < 1.0)) throw InvalidParameter("--eps-chsh must lie in (0, 1)");
        delta = std::sqrt(std::log(1.0 / *eps_chsh) / (2.0 * static_cast<double>(chsh_rounds)));
      }
      const ChshTestResult result = RunLocalTest(chsh_rounds, SourceModel(angles.theta(), source_epsilon),
                                                 angles, delta, key, {threads, false});
      Emit(ChshResultJson(result), out_flag, "chsh.json", out);
      return kExitOk;
    }

    if (qpq->parsed()) {
      require_positive(qpq_rounds, "--rounds");
      const SourceModel source(ParseAngle(qpq_angles.theta), source_epsilon);
      const AliceStrategy strategy = AliceStrategy::Biased(alice_bias);
      const KeyGenResult result = RunKeygen(qpq_rounds, loss, source, strategy, key, {threads, false});
      ordered_json doc = ordered_json::parse(KeyGenJson(result, emit_keys));
      doc["expected_conclusive_rate"] = ConclusiveProbability(source.theta(), source_epsilon, alice_bias);
      if (dilution_k > 1) {
        const DilutedKey diluted = DiluteKey(result, dilution_k);
        ordered_json d;
        d["k"] = dilution_k;
        d["final_key_length"] = diluted.bob_key.size();
        d["alice_known_final_bits"] = diluted.KnownCount();
        if (emit_keys) d["final_key"] = FormatBits(diluted.bob_key);
        doc["dilution"] = d;
      }
      Emit(doc.dump(2) + "\n", out_flag, "qpq.json", out);
      return kExitOk;
    }

    if (attack->parsed()) {
      require_positive(attack_rounds, "--rounds");
      const double theta = ParseAngle(attack_angles.theta);
      ordered_json doc;
      doc["schema_version"] = kSchemaVersion;
      doc["theta"] = SourceModel::Honest(theta).theta();
      doc["rounds"] = attack_rounds;
      ordered_json rows = ordered_json::array();
      std::uint64_t index = 0;
      for (double eps : ParseNumberList(attack_eps)) {
        const AliceStrategy strategy = AliceStrategy::Biased(eps);
        const KeyGenResult skewed = RunKeygen(attack_rounds, 0.0, SourceModel(theta, eps), strategy,
                                              key.Child(index).Child(0), {threads, false});
        const KeyGenResult honest = RunKeygen(attack_rounds, 0.0, SourceModel::Honest(theta), strategy,
                                              key.Child(index).Child(1), {threads, false});
        ++index;
        const double n = static_cast<double>(attack_rounds);
        ordered_json row;
        row["epsilon"] = eps;
        row["skewed_source_rate"] = static_cast<double>(skewed.correct_count) / n;
        row["skewed_source_expected"] = BiasedSuccessProbability(theta, eps);
        row["honest_source_rate"] = static_cast<double>(honest.correct_count) / n;
        row["honest_source_expected"] = HonestSuccessProbability(theta);
        row["incorrect_conclusive"] = (skewed.conclusive_count - skewed.correct_count) +
                                      (honest.conclusive_count - honest.correct_count);
        rows.push_back(row);
      }
      doc["settings"] = rows;
      Emit(doc.dump(2) + "\n", out_flag, "attack.json", out);
      return kExitOk;
    }

    if (protocol->parsed()) {
      BitString database;
      if (!database_file.empty()) {
        database = ReadDatabaseFile(database_file);
      } else if (!database_bits.empty()) {
        database = ParseBits(database_bits);
      } else if (database_random > 0) {
        RandomStream rng = key.Child(0xdb).Stream();
        database.resize(database_random);
        for (Bit& b : database) b = rng.Bit();
      } else {
        throw InvalidParameter("one of --database, --database-bits, --database-random is required");
      }
      ProtocolConfig config;
      config.n = protocol_n;
      config.gamma = gamma;
      config.angles = protocol_angles.Angles();
      config.source = SourceModel(config.angles.theta(), source_epsilon);
      config.strategy = AliceStrategy::Biased(alice_bias);
      config.k = dilution_k;
      config.loss_probability = loss;
      config.target_index = target_index;
      config.threads = threads;
      const BoundsParams params{gamma, protocol_n, eps_chsh.value_or(0.5), eps_qpq};
      config.slack_delta = eps_chsh ? ChernoffDelta(params) : slack.value_or(0.0);

      const ProtocolOutcome outcome = RunFullProtocol(config, database, key);
      ordered_json doc = ordered_json::parse(ProtocolOutcomeJson(outcome));
      if (eps_chsh) doc["nu"] = SerflingNu(params);
      Emit(doc.dump(2) + "\n", out_flag, "protocol.json", out);
      return outcome.status == ProtocolStatus::kAborted ? kExitAborted : kExitOk;
    }

    if (figure1->parsed()) {
      const auto angle_pairs = ParseAnglePairs(pairs);
      const std::vector<double> grid = UniformThetaGrid(grid_points);
      std::filesystem::path base;
      if (auto path = ReportPath(out_flag, "figure1.csv")) base = *path;
      for (std::size_t i = 0; i < angle_pairs.size(); ++i) {
        const auto [psi1, psi2] = angle_pairs[i];
        const std::string csv = Figure1Csv(Figure1Curve(psi1, psi2, grid), digits);
        if (angle_pairs.size() > 1) out << "# psi1=" << psi1 << ",psi2=" << psi2 << "\n";
        out << csv;
        if (!base.empty()) {
          std::filesystem::path target = base;
          if (angle_pairs.size() > 1) {
            target.replace_filename(base.stem().string() + "_" + std::to_string(i) +
                                    base.extension().string());
          }
          WriteFileAtomically(target, csv);
        }
      }
      return kExitOk;
    }

    if (table1->parsed()) {
      const ProtocolAngles angles = table_angles.Angles();
      const ConditionalTable table = ComputeConditionalTable(angles);
      if (table_rounds == 0) {
        Emit(ConditionalTableCsv(table), out_flag, "table1.csv", out);
        return kExitOk;
      }
      const ChshTestResult r = RunLocalTest(table_rounds, SourceModel::Honest(angles.theta()), angles,
                                            0.0, key, {threads, false});
      std::ostringstream csv;
      csv << "x,y,a,b,probability,empirical,sigma\n";
      char line[160];
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          std::uint64_t inputs = 0;
          for (int c = 0; c < 4; ++c) inputs += r.cell_counts[ConditionalTable::Index(x, y, c >> 1, c & 1)];
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              const double p = table.at(x, y, a, b);
              const double m = inputs == 0 ? 0.0 : static_cast<double>(inputs);
              const double freq = m == 0.0 ? 0.0 : r.cell_counts[ConditionalTable::Index(x, y, a, b)] / m;
              const double sigma = m == 0.0 ? 0.0 : std::sqrt(p * (1 - p) / m);
              std::snprintf(line, sizeof(line), "%d,%d,%d,%d,%.10f,%.10f,%.10f\n", x, y, a, b, p, freq, sigma);
              csv << line;
            }
          }
        }
      }
      Emit(csv.str(), out_flag, "table1.csv", out);
      return kExitOk;
    }

    if (bounds->parsed()) {
      Emit(BoundsJson(bounds_params, ComputeBounds(bounds_params)), out_flag, "bounds.json", out);
      return kExitOk;
    }

    if (verify->parsed()) {
      require_positive(verify_rounds, "--rounds");
      std::string report;
      const bool ok = RunVerification(seed, verify_rounds, threads, out, report);
      if (auto path = ReportPath(out_flag, "verify.json")) WriteFileAtomically(*path, report);
      return ok ? kExitOk : kExitVerifyFailed;
    }
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace qpqsim::cli
