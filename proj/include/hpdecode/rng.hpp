// Copyright 2026 The hpdecode Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hpdecode {

/// Mixes words into a well-spread 64-bit seed (splitmix64 finalizer chain).
inline std::uint64_t mix_seed(std::uint64_t value) {
    value += 0x9e3779b97f4a7c15ull;
    value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ull;
    value = (value ^ (value >> 27)) * 0x94d049bb133111ebull;
    return value ^ (value >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) { return mix_seed(mix_seed(master) ^ a); }

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix_seed(derive_seed(master, a) ^ mix_seed(b + 0x632be59bd9b4e019ull));
}

/// Seedable random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the distributions below are
/// written out explicitly so that draws replay bit-identically on any
/// standard library.
class Rng {
  public:
    static constexpr const char* kAlgorithm = "mt19937_64";

    Rng() : Rng(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("Rng::uniform_below: bound must be positive");
        }
        // Rejection on the top of the range keeps the draw exactly uniform.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Engine state in the standard textual form.
    std::string state() const {
        std::ostringstream out;
        out << engine_;
        return out.str();
    }

    void restore(const std::string& text) {
        std::istringstream in(text);
        in >> engine_;
        if (!in) {
            throw std::runtime_error("Rng::restore: corrupt engine state");
        }
    }

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace hpdecode
