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

#include <cstddef>
#include <stdexcept>
#include <string>

#include "hpdecode/pauli.hpp"

namespace hpdecode {

/// Input split A|B and output split C|D of an n-qubit scrambler. A is input
/// qubits [0, n_a), C is output qubits [0, n_c); B and D are the rest.
struct Partition {
    std::size_t n = 0;
    std::size_t n_a = 0;
    std::size_t n_c = 0;

    Partition() = default;
    Partition(std::size_t n_, std::size_t n_a_, std::size_t n_c_) : n(n_), n_a(n_a_), n_c(n_c_) { validate(); }

    void validate() const {
        if (n == 0 || n_a > n || n_c > n) {
            throw std::invalid_argument("Partition: need n >= 1 and n_a, n_c <= n (got n=" + std::to_string(n) +
                                        ", n_a=" + std::to_string(n_a) + ", n_c=" + std::to_string(n_c) + ")");
        }
        if (n >= 32) {
            throw std::invalid_argument("Partition: n too large");
        }
    }

    std::size_t n_b() const { return n - n_a; }
    std::size_t n_d() const { return n - n_c; }

    std::size_t d() const { return std::size_t{1} << n; }
    std::size_t d_a() const { return std::size_t{1} << n_a; }
    std::size_t d_b() const { return std::size_t{1} << n_b(); }
    std::size_t d_c() const { return std::size_t{1} << n_c; }
    std::size_t d_d() const { return std::size_t{1} << n_d(); }

    Region a() const { return Region::range(0, n_a); }
    Region b() const { return Region::range(n_a, n_b()); }
    Region c() const { return Region::range(0, n_c); }
    Region d_region() const { return Region::range(n_c, n_d()); }

    /// d_A^-2 + d_D^-2 - (d_A d_D)^-2, the OTOC average of a perfect scrambler.
    double scrambling_plateau() const {
        const double da2 = static_cast<double>(d_a()) * static_cast<double>(d_a());
        const double dd2 = static_cast<double>(d_d()) * static_cast<double>(d_d());
        return 1.0 / da2 + 1.0 / dd2 - 1.0 / (da2 * dd2);
    }

    bool operator==(const Partition&) const = default;
};

}  // namespace hpdecode
