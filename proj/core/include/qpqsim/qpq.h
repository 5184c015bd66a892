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

#ifndef QPQSIM_QPQ_H_
#define QPQSIM_QPQ_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpqsim/analytics.h"
#include "qpqsim/chsh.h"
#include "qpqsim/quantum.h"
#include "qpqsim/random.h"

namespace qpqsim {

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;
// Alice's view of a key: a value where she knows the bit, nullopt elsewhere.
using KnowledgeMask = std::vector<std::optional<Bit>>;

enum class AliceBasis : std::uint8_t { kPhi0, kPhi1 };

// Alice picks {phi1} with probability 1/2 + bias and {phi0} otherwise.
class AliceStrategy {
 public:
  enum class Kind { kHonest, kBiased };

  static AliceStrategy Honest() { return AliceStrategy(0.0); }
  // bias in (-1/2, 1/2); a zero bias is reported as honest.
  static AliceStrategy Biased(double bias) { return AliceStrategy(bias); }

  Kind kind() const { return bias_ == 0.0 ? Kind::kHonest : Kind::kBiased; }
  double bias() const { return bias_; }
  double phi1_probability() const { return 0.5 + bias_; }

 private:
  explicit AliceStrategy(double bias);
  double bias_;
};

struct RawKeyRecord {
  Bit bob_bit = 0;
  AliceBasis alice_basis = AliceBasis::kPhi0;
  bool alice_outcome_orthogonal = false;
  // Present iff the outcome was orthogonal: phi0-perp => 1, phi1-perp => 0.
  std::optional<Bit> alice_guess;
};

// One key-generation round: Bob measures his qubit in the computational basis
// and Alice measures hers in {phi0} or {phi1}, both from the shared state.
class KeyGenerator {
 public:
  KeyGenerator(const SourceModel& source, const AliceStrategy& strategy);

  RawKeyRecord Round(RandomStream& rng) const;

 private:
  AliceStrategy strategy_;
  JointDistribution phi0_dist_;
  JointDistribution phi1_dist_;
};

RawKeyRecord KeygenRound(const SourceModel& source, const AliceStrategy& strategy,
                         RandomStream& rng);

struct KeyGenResult {
  std::size_t rounds = 0;
  BitString bob_raw_key;
  KnowledgeMask alice_knowledge;
  std::size_t conclusive_count = 0;
  std::size_t correct_count = 0;
  std::size_t lost_count = 0;
};

// Sends `rounds` pairs; each is lost independently with probability
// loss_probability and dropped before measurement. Surviving rounds fill
// aligned bob_raw_key / alice_knowledge entries.
KeyGenResult RunKeygen(std::size_t rounds, double loss_probability, const SourceModel& source,
                       const AliceStrategy& strategy, SeedKey key,
                       const CampaignOptions& options = {});

struct DilutedKey {
  BitString bob_key;
  KnowledgeMask alice_knowledge;

  std::size_t KnownCount() const;
};

// Cuts the raw key into k blocks of N = floor(len / k) bits (the tail is
// dropped) and XORs them position-wise. Alice learns final bit t only if she
// knew all k raw bits feeding it.
DilutedKey DiluteKey(std::span<const Bit> raw_key, std::span<const std::optional<Bit>> knowledge,
                     std::size_t k);
DilutedKey DiluteKey(const KeyGenResult& result, std::size_t k);

struct QueryTranscript {
  std::size_t database_size = 0;
  std::size_t target_index = 0;
  std::size_t known_key_index = 0;
  std::int64_t announced_shift = 0;
  BitString shifted_key;
  BitString ciphertext;
  Bit recovered_bit = 0;
};

struct KnownKeyBit {
  std::size_t index = 0;
  Bit value = 0;
};

// Alice announces s = j - i; Bob uses K0[t] = K[(t + s) mod N] as a one-time
// pad so that K0[i] = K[j], and Alice unpads ciphertext[i] with her bit.
QueryTranscript PrivateQuery(std::span<const Bit> database, std::span<const Bit> final_key,
                             KnownKeyBit alice_known, std::size_t target_index);

struct ProtocolConfig {
  std::size_t n = 0;
  double gamma = 0.5;
  SourceModel source = SourceModel::Honest(0.0);
  ProtocolAngles angles{0.0, 0.0, 0.0};
  AliceStrategy strategy = AliceStrategy::Honest();
  std::size_t k = 1;
  double loss_probability = 0.0;
  double slack_delta = 0.0;
  // Database index Alice queries; drawn uniformly when absent.
  std::optional<std::size_t> target_index;
  unsigned threads = 1;
};

enum class ProtocolStatus { kAborted, kIncomplete, kCompleted };

const char* ToString(ProtocolStatus status);

struct ProtocolOutcome {
  ProtocolStatus status = ProtocolStatus::kIncomplete;
  std::string detail;
  std::size_t chsh_size = 0;
  std::size_t qpq_size = 0;
  ChshTestResult chsh;
  std::optional<KeyGenResult> keygen;
  std::size_t final_key_length = 0;
  std::size_t alice_known_final_bits = 0;
  std::optional<QueryTranscript> query;
  // Whether the recovered bit equals database[target_index].
  bool query_correct = false;
};

// Partition, local CHSH test on the test set, and on success key generation
// over the remaining pairs, dilution and one private query. The diluted key is
// truncated to the database length; a key shorter than the database, or one
// where Alice knows no bit, ends the run as kIncomplete.
ProtocolOutcome RunFullProtocol(const ProtocolConfig& config, std::span<const Bit> database,
                                SeedKey key);

}  // namespace qpqsim

#endif  // QPQSIM_QPQ_H_
