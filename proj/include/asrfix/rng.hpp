// Copyright 2026 The asrfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRFIX_RNG_HPP_
#define ASRFIX_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace asrfix {

// Deterministic RNG used everywhere seeded randomness is required.
//
// std::mt19937_64 output is fully specified by the standard, but the
// std:: distributions are not, so all derived draws are implemented here.
// Identical seeds therefore produce identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1).
  double unit();

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

// Per-item seed derivation: stable under reordering and parallelism.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key);

}  // namespace asrfix

#endif  // ASRFIX_RNG_HPP_
