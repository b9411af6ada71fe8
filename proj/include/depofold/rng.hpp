// Copyright 2026 The depofold Authors
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

#ifndef DEPOFOLD_RNG_HPP_
#define DEPOFOLD_RNG_HPP_

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace depofold {

/// Counter-based generator. A stream is identified by a 64-bit key derived from
/// (master seed, purpose tag, indices); the n-th output is a pure function of
/// (key, n), so streams can be split and consumed in any order or thread.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key = 0) : key_(key) {}

  static Rng keyed(std::uint64_t master, std::string_view tag, std::uint64_t a = 0,
                   std::uint64_t b = 0);

  /// Independent child stream.
  Rng split(std::uint64_t index) const;
  Rng split(std::string_view tag, std::uint64_t index = 0) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  /// k distinct indices from [0, n), returned in increasing order.
  std::vector<std::size_t> choose_sorted(std::size_t n, std::size_t k);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_tag(std::string_view tag);

}  // namespace depofold

#endif  // DEPOFOLD_RNG_HPP_
