// Copyright 2026 The ptpath Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PTPATH_RNG_HPP
#define PTPATH_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace ptpath {

/// Source of 32-bit random words. Satisfies UniformRandomBitGenerator so it
/// can drive the <random> distributions directly; the call operator is
/// virtual so tests can substitute scripted streams.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  virtual ~RandomStream() = default;
  virtual result_type operator()() = 0;

  /// Uniform double in the open interval (0,1), 53 bits of resolution.
  double uniform();
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Distinguishes independent stream families that share (seed, index, step).
enum class StreamPurpose : std::uint32_t {
  explore = 0,
  swap = 1,
  parity = 2,
  init = 3,
  data = 4,
  oracle = 5,
  oracle_alt = 6,
};

/// Counter-based stream keyed by (seed, purpose, index, step). Two streams
/// with the same key produce identical output regardless of creation order
/// or thread, which is what makes parallel exploration reproducible.
class PhiloxStream final : public RandomStream {
 public:
  PhiloxStream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t index,
               std::uint64_t step);

  result_type operator()() override;

 private:
  PhiloxCounter counter_{};
  PhiloxKey key_{};
  PhiloxCounter block_{};
  int next_word_ = 4;
};

}  // namespace ptpath

#endif  // PTPATH_RNG_HPP
