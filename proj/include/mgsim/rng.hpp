// Copyright 2026 The mgsim Authors
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

#pragma once

#include <cstdint>

namespace mgsim {

/// Counter-based pseudorandom stream (SplitMix64 output function over a
/// keyed counter). Every draw is a pure function of (key, counter), so
/// streams are reproducible across platforms and can be split into
/// independent child streams, one per sampling shot.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key = 0) : key_(key), counter_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + 0x9E3779B97F4A7C15ull * ++counter_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Independent child stream; `index` is typically the shot number.
    CounterRng split(std::uint64_t index) const {
        std::uint64_t z = key_ ^ (0xD1B54A32D192ED03ull * (index + 1));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return CounterRng(z ^ (z >> 31));
    }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace mgsim
