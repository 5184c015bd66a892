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

#ifndef QPQSIM_RANDOM_H_
#define QPQSIM_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace qpqsim {

// A single sequential random stream. Not thread-safe; give each worker its
// own stream derived from a SeedKey.
class RandomStream {
 public:
  using Engine = std::mt19937_64;

  explicit RandomStream(std::uint64_t key);

  // Uniform on [0, 1).
  double Uniform();
  bool Bernoulli(double p);
  std::uint8_t Bit() { return static_cast<std::uint8_t>(engine_() & 1u); }
  // Uniform integer on [0, bound). bound must be positive.
  std::size_t Below(std::size_t bound);

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
};

// Keyed derivation of independent substreams. A master seed yields child keys
// by index, so trial t of a run always sees the same stream no matter which
// thread executes it or in which order trials are scheduled.
class SeedKey {
 public:
  constexpr SeedKey() = default;
  constexpr explicit SeedKey(std::uint64_t seed) : value_(seed) {}

  SeedKey Child(std::uint64_t index) const;
  RandomStream Stream() const { return RandomStream(value_); }
  std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_ = 0;
};

// Rounds are grouped into fixed-size blocks; block b of a campaign draws from
// key.Child(b). The block size is part of the reproducibility contract.
inline constexpr std::size_t kRoundsPerBlock = std::size_t{1} << 16;

// Runs fn(block_index, begin, end) for every block covering [0, total), on at
// most `threads` workers. fn must only touch per-block state.
void ForEachBlock(std::size_t total, std::size_t block_size, unsigned threads,
                  const std::function<void(std::size_t, std::size_t,
                                           std::size_t)>& fn);

// Number of workers to use when the caller passes 0.
unsigned DefaultThreadCount();

}  // namespace qpqsim

#endif  // QPQSIM_RANDOM_H_
