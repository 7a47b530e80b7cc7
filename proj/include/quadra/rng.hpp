// Copyright 2026 The Quadra Authors
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

#ifndef QUADRA_RNG_HPP_
#define QUADRA_RNG_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>

namespace quadra {

/// Unbiased uniform draw in [0, bound) from a std::mt19937_64 stream.
/// The engine's output sequence is fixed by the standard, and this mapping
/// avoids std::uniform_int_distribution (whose results are
/// implementation-defined), so draws are identical on every toolchain.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform bound must be positive");
  // Reject the low sliver that would bias r % bound: threshold = 2^64 mod bound.
  const std::uint64_t threshold = -bound % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform integer in the closed range [lo, hi].
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo,
                                std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform range is empty");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<std::int64_t>(uniform_below(rng, span));
}

}  // namespace quadra

#endif  // QUADRA_RNG_HPP_
