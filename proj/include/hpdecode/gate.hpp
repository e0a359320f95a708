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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hpdecode {

enum class GateKind : std::uint8_t { CNOT, H, P, T };

inline std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::CNOT: return "CNOT";
        case GateKind::H: return "H";
        case GateKind::P: return "P";
        case GateKind::T: return "T";
    }
    return "?";
}

inline GateKind parse_gate_kind(std::string_view name) {
    if (name == "CNOT") return GateKind::CNOT;
    if (name == "H") return GateKind::H;
    if (name == "P") return GateKind::P;
    if (name == "T") return GateKind::T;
    throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

/// One gate from {CNOT, H, P, T}. For CNOT, `q0` is the control and `q1` the
/// target; single-qubit gates use `q0` only. P = diag(1, i), T = diag(1, e^{i pi/4}).
struct Gate {
    GateKind kind = GateKind::H;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;

    static Gate cnot(std::uint32_t control, std::uint32_t target) { return {GateKind::CNOT, control, target}; }
    static Gate h(std::uint32_t q) { return {GateKind::H, q, 0}; }
    static Gate p(std::uint32_t q) { return {GateKind::P, q, 0}; }
    static Gate t(std::uint32_t q) { return {GateKind::T, q, 0}; }

    bool two_qubit() const { return kind == GateKind::CNOT; }
    bool clifford() const { return kind != GateKind::T; }

    void validate(std::size_t n) const {
        if (q0 >= n || (two_qubit() && q1 >= n)) {
            throw std::out_of_range("Gate " + str() + ": qubit index out of range for n=" + std::to_string(n));
        }
        if (two_qubit() && q0 == q1) {
            throw std::invalid_argument("Gate " + str() + ": control equals target");
        }
    }

    std::string str() const {
        std::string s(gate_name(kind));
        s += ' ' + std::to_string(q0);
        if (two_qubit()) {
            s += ' ' + std::to_string(q1);
        }
        return s;
    }

    bool operator==(const Gate& other) const {
        return kind == other.kind && q0 == other.q0 && (!two_qubit() || q1 == other.q1);
    }
};

/// 2x2 matrix of a single-qubit gate, row-major.
inline std::array<std::complex<double>, 4> single_qubit_matrix(GateKind kind) {
    using c = std::complex<double>;
    const double s = 1.0 / std::numbers::sqrt2;
    switch (kind) {
        case GateKind::H: return {c{s, 0}, c{s, 0}, c{s, 0}, c{-s, 0}};
        case GateKind::P: return {c{1, 0}, c{0, 0}, c{0, 0}, c{0, 1}};
        case GateKind::T: return {c{1, 0}, c{0, 0}, c{0, 0}, c{s, s}};
        case GateKind::CNOT: break;
    }
    throw std::invalid_argument("single_qubit_matrix: CNOT is a two-qubit gate");
}

}  // namespace hpdecode
