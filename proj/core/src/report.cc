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

#include "qpqsim/report.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "qpqsim/error.h"

namespace qpqsim {
namespace {

using nlohmann::ordered_json;

std::string Dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

double Rate(std::size_t count, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

ordered_json ChshObject(const ChshTestResult& r) {
  ordered_json j;
  j["rounds"] = r.rounds;
  j["wins"] = r.wins;
  j["win_rate"] = r.win_rate;
  j["threshold"] = r.threshold;
  j["slack_delta"] = r.slack_delta;
  j["aborted"] = r.aborted;
  return j;
}

ordered_json KeyGenObject(const KeyGenResult& r, bool include_keys) {
  ordered_json j;
  j["rounds"] = r.rounds;
  j["lost_count"] = r.lost_count;
  j["key_length"] = r.bob_raw_key.size();
  j["conclusive_count"] = r.conclusive_count;
  j["correct_count"] = r.correct_count;
  j["conclusive_rate"] = Rate(r.conclusive_count, r.bob_raw_key.size());
  j["correct_rate"] = Rate(r.correct_count, r.bob_raw_key.size());
  if (include_keys) {
    j["bob_raw_key"] = FormatBits(r.bob_raw_key);
    std::string mask;
    mask.reserve(r.alice_knowledge.size());
    for (const auto& bit : r.alice_knowledge) mask.push_back(bit ? static_cast<char>('0' + *bit) : '?');
    j["alice_knowledge"] = mask;
  }
  return j;
}

std::string FormatFixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string ChshResultJson(const ChshTestResult& result) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j.update(ChshObject(result));
  return Dump(j);
}

std::string BoundsJson(const BoundsParams& params, const BoundsReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["gamma"] = params.gamma;
  j["n"] = params.n;
  j["epsilon_chsh"] = params.epsilon_chsh;
  j["epsilon_qpq"] = params.epsilon_qpq;
  j["delta"] = report.delta;
  j["nu"] = report.nu;
  return Dump(j);
}

std::string KeyGenJson(const KeyGenResult& result, bool include_keys) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j.update(KeyGenObject(result, include_keys));
  return Dump(j);
}

std::string ProtocolOutcomeJson(const ProtocolOutcome& outcome) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["status"] = ToString(outcome.status);
  j["detail"] = outcome.detail;
  j["chsh_size"] = outcome.chsh_size;
  j["qpq_size"] = outcome.qpq_size;
  j["chsh"] = ChshObject(outcome.chsh);
  if (outcome.keygen) j["keygen"] = KeyGenObject(*outcome.keygen, false);
  j["final_key_length"] = outcome.final_key_length;
  j["alice_known_final_bits"] = outcome.alice_known_final_bits;
  if (outcome.query) {
    const QueryTranscript& q = *outcome.query;
    ordered_json query;
    query["database_size"] = q.database_size;
    query["target_index"] = q.target_index;
    query["known_key_index"] = q.known_key_index;
    query["announced_shift"] = q.announced_shift;
    query["ciphertext"] = FormatBits(q.ciphertext);
    query["recovered_bit"] = q.recovered_bit;
    query["correct"] = outcome.query_correct;
    j["query"] = query;
  }
  return Dump(j);
}

std::string Figure1Csv(std::span<const CurvePoint> curve, int digits) {
  if (digits < 1 || digits > 17) throw InvalidParameter("CSV digits must lie in [1, 17]");
  std::string out = "theta,win_probability\n";
  for (const CurvePoint& p : curve) {
    out += FormatFixed(p.theta, digits) + "," + FormatFixed(p.win_probability, digits) + "\n";
  }
  return out;
}

std::string ConditionalTableCsv(const ConditionalTable& table) {
  std::string out = "x,y,a,b,probability\n";
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          out += std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(a) + "," +
                 std::to_string(b) + "," + FormatFixed(table.at(x, y, a, b), 10) + "\n";
        }
      }
    }
  }
  return out;
}

std::string FormatBits(std::span<const Bit> bits) {
  std::string out;
  out.reserve(bits.size());
  for (Bit b : bits) out.push_back(b ? '1' : '0');
  return out;
}

BitString ParseBits(std::string_view text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw InvalidParameter("bit string may only contain '0' and '1'");
    bits.push_back(static_cast<Bit>(c - '0'));
  }
  return bits;
}

BitString ParseDatabase(std::string_view text) {
  BitString bits;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    if (line.empty()) continue;
    for (char c : line) {
      if (c != '0' && c != '1') {
        throw InvalidParameter("database line " + std::to_string(line_no) +
                               ": expected only '0' or '1'");
      }
      bits.push_back(static_cast<Bit>(c - '0'));
    }
  }
  if (bits.empty()) throw InvalidParameter("database is empty");
  return bits;
}

BitString ReadDatabaseFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open database file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseDatabase(buffer.str());
}

void WriteFileAtomically(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move report into place at " + path.string() + ": " +
                             ec.message());
  }
}

}  // namespace qpqsim
