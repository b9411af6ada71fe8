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

#include "depofold/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace depofold {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

Rng Rng::keyed(std::uint64_t master, std::string_view tag, std::uint64_t a, std::uint64_t b) {
  std::uint64_t k = mix64(master + kGolden);
  k = mix64(k ^ hash_tag(tag));
  k = mix64(k ^ mix64(a + 0x632be59bd9b4e019ULL));
  k = mix64(k ^ mix64(b + 0x85157af5ULL));
  return Rng(k);
}

Rng Rng::split(std::uint64_t index) const {
  return Rng(mix64(mix64(key_ ^ 0xd1b54a32d192ed03ULL) + mix64(index + kGolden)));
}

Rng Rng::split(std::string_view tag, std::uint64_t index) const {
  return Rng(mix64(key_ ^ hash_tag(tag))).split(index);
}

std::uint64_t Rng::next_u64() {
  // Two finalizer rounds over (key, counter); the first decorrelates nearby keys.
  const std::uint64_t n = counter_++;
  return mix64(mix64(key_ + n * kGolden) ^ (n + 0x2545f4914f6cdd1dULL));
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  // Lemire's nearly-divisionless rejection.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::size_t> Rng::choose_sorted(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("Rng::choose_sorted: k > n");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace depofold
