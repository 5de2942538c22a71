// Copyright 2026 The CSMG Authors
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

#ifndef CSMG_RNG_HPP
#define CSMG_RNG_HPP

#include <cstdint>
#include <random>

namespace csmg {

/// Seedable random source with deterministic substreams.
///
/// The engine (mt19937_64) and the seeding algorithm (std::seed_seq) are both
/// fully specified by the standard, and the conversions below avoid the
/// implementation-defined std distributions, so a (seed, stream) pair yields
/// the same sequence on every conforming platform.
class Rng {
   public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32),
        };
        engine_.seed(seq);
    }

    std::uint64_t bits() {
        return engine_();
    }

    bool coin() {
        return (engine_() >> 63) != 0;
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// True with probability p. p <= 0 never fires, p >= 1 always fires.
    bool bernoulli(double p) {
        return uniform() < p;
    }

    /// Uniform over {0, 1, 2}.
    unsigned below3() {
        // 2^64 mod 3 == 1, so rejecting the single top value removes the bias.
        std::uint64_t v;
        do {
            v = engine_();
        } while (v == ~std::uint64_t{0});
        return static_cast<unsigned>(v % 3);
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace csmg

#endif  // CSMG_RNG_HPP
