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

#include "qpqsim/qpq.h"

#include <cmath>
#include <string>

#include "qpqsim/error.h"

namespace qpqsim {

AliceStrategy::AliceStrategy(double bias) : bias_(bias) {
  if (!(bias > -0.5 && bias < 0.5)) throw InvalidParameter("Alice's basis bias must lie in (-1/2, 1/2)");
}

KeyGenerator::KeyGenerator(const SourceModel& source, const AliceStrategy& strategy)
    : strategy_(strategy) {
  const TwoQubitState state = EntangledSourceState(source);
  const MeasurementBasis bob = MeasurementBasis::Computational();
  phi0_dist_ = JointOutcomeProbabilities(
      state, bob, MeasurementBasis::FromAngle(source.theta(), BasisLabel::kPhi0));
  phi1_dist_ = JointOutcomeProbabilities(
      state, bob, MeasurementBasis::FromAngle(-source.theta(), BasisLabel::kPhi1));
}

RawKeyRecord KeyGenerator::Round(RandomStream& rng) const {
  RawKeyRecord r;
  r.alice_basis = rng.Bernoulli(strategy_.phi1_probability()) ? AliceBasis::kPhi1 : AliceBasis::kPhi0;
  const int cell = SampleCell(r.alice_basis == AliceBasis::kPhi0 ? phi0_dist_ : phi1_dist_, rng);
  r.bob_bit = static_cast<Bit>(cell >> 1);
  r.alice_outcome_orthogonal = (cell & 1) != 0;
  if (r.alice_outcome_orthogonal) {
    // phi0-perp rules out Bob's 0, phi1-perp rules out Bob's 1.
    r.alice_guess = r.alice_basis == AliceBasis::kPhi0 ? Bit{1} : Bit{0};
  }
  return r;
}

RawKeyRecord KeygenRound(const SourceModel& source, const AliceStrategy& strategy,
                         RandomStream& rng) {
  return KeyGenerator(source, strategy).Round(rng);
}

KeyGenResult RunKeygen(std::size_t rounds, double loss_probability, const SourceModel& source,
                       const AliceStrategy& strategy, SeedKey key,
                       const CampaignOptions& options) {
  if (rounds < 1) throw InvalidParameter("key generation needs at least one round");
  if (!(loss_probability >= 0.0 && loss_probability < 1.0)) {
    throw InvalidParameter("loss probability must lie in [0, 1)");
  }
  const KeyGenerator generator(source, strategy);

  struct BlockOutput {
    BitString bob;
    KnowledgeMask alice;
    std::size_t conclusive = 0;
    std::size_t correct = 0;
    std::size_t lost = 0;
  };
  const std::size_t blocks = (rounds + kRoundsPerBlock - 1) / kRoundsPerBlock;
  std::vector<BlockOutput> outputs(blocks);

  ForEachBlock(rounds, kRoundsPerBlock, options.threads,
               [&](std::size_t block, std::size_t begin, std::size_t end) {
                 RandomStream rng = key.Child(block).Stream();
                 BlockOutput& out = outputs[block];
                 out.bob.reserve(end - begin);
                 out.alice.reserve(end - begin);
                 for (std::size_t i = begin; i < end; ++i) {
                   // The loss coin is drawn every round so that surviving
                   // rounds see the same stream layout at any loss rate.
                   if (rng.Bernoulli(loss_probability)) {
                     ++out.lost;
                     continue;
                   }
                   const RawKeyRecord r = generator.Round(rng);
                   out.bob.push_back(r.bob_bit);
                   out.alice.push_back(r.alice_guess);
                   if (r.alice_guess) {
                     ++out.conclusive;
                     if (*r.alice_guess == r.bob_bit) ++out.correct;
                   }
                 }
               });

  KeyGenResult result;
  result.rounds = rounds;
  for (BlockOutput& out : outputs) {
    result.bob_raw_key.insert(result.bob_raw_key.end(), out.bob.begin(), out.bob.end());
    result.alice_knowledge.insert(result.alice_knowledge.end(), out.alice.begin(), out.alice.end());
    result.conclusive_count += out.conclusive;
    result.correct_count += out.correct;
    result.lost_count += out.lost;
  }
  return result;
}

std::size_t DilutedKey::KnownCount() const {
  std::size_t known = 0;
  for (const auto& bit : alice_knowledge) known += bit.has_value() ? 1 : 0;
  return known;
}

DilutedKey DiluteKey(std::span<const Bit> raw_key, std::span<const std::optional<Bit>> knowledge,
                     std::size_t k) {
  if (raw_key.size() != knowledge.size()) {
    throw InvalidParameter("raw key and knowledge mask differ in length");
  }
  if (k < 1) throw InvalidParameter("dilution factor k must be at least 1");
  if (k > raw_key.size()) throw InvalidParameter("dilution factor k exceeds the raw key length");

  const std::size_t n = raw_key.size() / k;
  DilutedKey out;
  out.bob_key.assign(n, 0);
  out.alice_knowledge.assign(n, std::nullopt);
  for (std::size_t t = 0; t < n; ++t) {
    Bit bob = 0;
    Bit alice = 0;
    bool alice_knows = true;
    for (std::size_t block = 0; block < k; ++block) {
      const std::size_t pos = block * n + t;
      bob ^= raw_key[pos];
      if (knowledge[pos]) {
        alice ^= *knowledge[pos];
      } else {
        alice_knows = false;
      }
    }
    out.bob_key[t] = bob;
    if (alice_knows) out.alice_knowledge[t] = alice;
  }
  return out;
}

DilutedKey DiluteKey(const KeyGenResult& result, std::size_t k) {
  return DiluteKey(result.bob_raw_key, result.alice_knowledge, k);
}

QueryTranscript PrivateQuery(std::span<const Bit> database, std::span<const Bit> final_key,
                             KnownKeyBit alice_known, std::size_t target_index) {
  const std::size_t n = database.size();
  if (n == 0) throw InvalidParameter("database must not be empty");
  if (final_key.size() != n) throw InvalidParameter("key length must equal database length");
  if (target_index >= n || alice_known.index >= n) {
    throw InvalidParameter("query index out of range");
  }

  QueryTranscript q;
  q.database_size = n;
  q.target_index = target_index;
  q.known_key_index = alice_known.index;
  q.announced_shift =
      static_cast<std::int64_t>(alice_known.index) - static_cast<std::int64_t>(target_index);

  const auto signed_n = static_cast<std::int64_t>(n);
  const std::int64_t shift = ((q.announced_shift % signed_n) + signed_n) % signed_n;
  q.shifted_key.resize(n);
  q.ciphertext.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    q.shifted_key[t] = final_key[(t + static_cast<std::size_t>(shift)) % n];
    q.ciphertext[t] = static_cast<Bit>((database[t] ^ q.shifted_key[t]) & 1u);
  }
  q.recovered_bit = static_cast<Bit>((q.ciphertext[target_index] ^ alice_known.value) & 1u);
  return q;
}

const char* ToString(ProtocolStatus status) {
  switch (status) {
    case ProtocolStatus::kAborted: return "aborted";
    case ProtocolStatus::kIncomplete: return "incomplete";
    case ProtocolStatus::kCompleted: return "completed";
  }
  return "unknown";
}

ProtocolOutcome RunFullProtocol(const ProtocolConfig& config, std::span<const Bit> database,
                                SeedKey key) {
  if (database.empty()) throw InvalidParameter("database must not be empty");
  for (Bit b : database) {
    if (b > 1) throw InvalidParameter("database entries must be bits");
  }
  if (config.k < 1) throw InvalidParameter("dilution factor k must be at least 1");
  if (config.target_index && *config.target_index >= database.size()) {
    throw InvalidParameter("target index outside the database");
  }
  if (!(config.loss_probability >= 0.0 && config.loss_probability < 1.0)) {
    throw InvalidParameter("loss probability must lie in [0, 1)");
  }

  ProtocolOutcome outcome;
  RandomStream partition_rng = key.Child(0).Stream();
  const Partition partition = PartitionIndices(config.n, config.gamma, partition_rng);
  outcome.chsh_size = partition.chsh.size();
  outcome.qpq_size = partition.qpq.size();

  const CampaignOptions options{config.threads, false};
  outcome.chsh = RunLocalTest(partition.chsh.size(), config.source, config.angles,
                              config.slack_delta, key.Child(1), options);
  if (outcome.chsh.aborted) {
    outcome.status = ProtocolStatus::kAborted;
    outcome.detail = "local CHSH win rate below threshold";
    return outcome;
  }

  outcome.keygen = RunKeygen(partition.qpq.size(), config.loss_probability, config.source,
                             config.strategy, key.Child(2), options);
  const KeyGenResult& raw = *outcome.keygen;
  if (raw.bob_raw_key.size() < config.k) {
    outcome.status = ProtocolStatus::kIncomplete;
    outcome.detail = "raw key shorter than the dilution factor";
    return outcome;
  }
  DilutedKey final_key = DiluteKey(raw, config.k);
  if (final_key.bob_key.size() < database.size()) {
    outcome.final_key_length = final_key.bob_key.size();
    outcome.alice_known_final_bits = final_key.KnownCount();
    outcome.status = ProtocolStatus::kIncomplete;
    outcome.detail = "diluted key shorter than the database";
    return outcome;
  }
  final_key.bob_key.resize(database.size());
  final_key.alice_knowledge.resize(database.size());
  outcome.final_key_length = final_key.bob_key.size();

  std::vector<std::size_t> known;
  for (std::size_t t = 0; t < final_key.alice_knowledge.size(); ++t) {
    if (final_key.alice_knowledge[t]) known.push_back(t);
  }
  outcome.alice_known_final_bits = known.size();
  if (known.empty()) {
    outcome.status = ProtocolStatus::kIncomplete;
    outcome.detail = "Alice knows no bit of the final key";
    return outcome;
  }

  RandomStream query_rng = key.Child(3).Stream();
  const std::size_t target =
      config.target_index ? *config.target_index : query_rng.Below(database.size());
  const std::size_t j = known[query_rng.Below(known.size())];
  outcome.query = PrivateQuery(database, final_key.bob_key,
                               {j, *final_key.alice_knowledge[j]}, target);
  outcome.query_correct = outcome.query->recovered_bit == database[target];
  outcome.status = ProtocolStatus::kCompleted;
  return outcome;
}

}  // namespace qpqsim
