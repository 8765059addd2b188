// Copyright 2026 The Authors.
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

// Counter-based random streams. Every draw is a pure function of a 64-bit
// key and a draw index, so a stream can be split by deriving child keys
// (derive_seed) and results do not depend on which thread consumes it.

#ifndef FAIRSPREAD_RANDOM_H_
#define FAIRSPREAD_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace fairspread {

// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr uint64_t derive_seed(uint64_t parent, uint64_t index) {
  return mix64(mix64(parent) ^
               mix64(index * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL));
}

// Labeled child key, e.g. derive_seed(seed, "demands").
uint64_t derive_seed(uint64_t parent, std::string_view label);

// Maps 64 random bits to a double in [0, 1).
constexpr double to_unit(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class RandomStream {
 public:
  using result_type = uint64_t;

  explicit RandomStream(uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return at(counter_++); }

  // The i-th draw of this stream, independent of the cursor.
  result_type at(uint64_t i) const { return mix64(key_ ^ mix64(i)); }
  double uniform_at(uint64_t i) const { return to_unit(at(i)); }

  double uniform() { return to_unit((*this)()); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t below(uint64_t n) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>((*this)()) * n;
    return static_cast<uint64_t>(wide >> 64);
  }

  // Exponential variate with the given rate (> 0).
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  uint64_t key() const { return key_; }
  RandomStream child(uint64_t index) const {
    return RandomStream(derive_seed(key_, index));
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace fairspread

#endif  // FAIRSPREAD_RANDOM_H_
