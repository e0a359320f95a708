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

#include <stdexcept>
#include <vector>

#include "hpdecode/circuit.hpp"
#include "hpdecode/gate.hpp"
#include "hpdecode/pauli.hpp"

namespace hpdecode {

namespace detail {

// Writing a letter as i^{xz} X^x Z^z, Clifford gates act on the X^x Z^z part
// by the textbook bit rules; the i^{xz} bookkeeping supplies the phase.
inline unsigned xz_count(const Pauli& p, std::uint32_t a, std::uint32_t b) {
    return (p.x(a) && p.z(a) ? 1u : 0u) + (p.x(b) && p.z(b) ? 1u : 0u);
}

}  // namespace detail

/// p <- g p g^dagger for a Clifford gate.
inline void conjugate_by_gate(Pauli& p, const Gate& g) {
    switch (g.kind) {
        case GateKind::H: {
            const bool x = p.x(g.q0), z = p.z(g.q0);
            p.set(g.q0, z, x);
            if (x && z) {
                p.set_phase(p.phase() + 2);
            }
            return;
        }
        case GateKind::P: {
            const bool x = p.x(g.q0), z = p.z(g.q0);
            if (x) {
                if (z) {
                    p.set_phase(p.phase() + 2);
                }
                p.set(g.q0, x, !z);
            }
            return;
        }
        case GateKind::CNOT: {
            const std::uint32_t c = g.q0, t = g.q1;
            const unsigned before = detail::xz_count(p, c, t);
            const bool xc = p.x(c), zc = p.z(c), xt = p.x(t), zt = p.z(t);
            p.set(c, xc, zc != zt);
            p.set(t, xt != xc, zt);
            const unsigned after = detail::xz_count(p, c, t);
            p.set_phase(p.phase() + before + 4 - after);
            return;
        }
        case GateKind::T: break;
    }
    throw std::invalid_argument("conjugate_by_gate: T is not a Clifford gate");
}

/// p <- g^dagger p g for a Clifford gate.
inline void conjugate_by_gate_inverse(Pauli& p, const Gate& g) {
    conjugate_by_gate(p, g);
    if (g.kind == GateKind::P) {
        // P^dagger = P^3.
        conjugate_by_gate(p, g);
        conjugate_by_gate(p, g);
    }
}

/// Heisenberg images of the generators X_i, Z_i under a Clifford U, in both
/// directions (U P U^dagger and U^dagger P U).
class CliffordTableau {
  public:
    CliffordTableau() = default;

    static CliffordTableau identity(std::size_t n) {
        CliffordTableau tab;
        tab.n_ = n;
        for (std::size_t q = 0; q < n; ++q) {
            tab.fx_.push_back(Pauli::single(n, q, 'X'));
            tab.fz_.push_back(Pauli::single(n, q, 'Z'));
        }
        tab.ix_ = tab.fx_;
        tab.iz_ = tab.fz_;
        return tab;
    }

    static CliffordTableau from_circuit(const Circuit& c) {
        if (!c.clifford()) {
            throw std::invalid_argument("CliffordTableau::from_circuit: circuit contains T gates");
        }
        auto tab = identity(c.num_qubits());
        for (const auto& g : c.gates()) {
            tab.apply(g);
        }
        return tab;
    }

    std::size_t num_qubits() const { return n_; }
    const Pauli& image_x(std::size_t q) const { return fx_.at(q); }
    const Pauli& image_z(std::size_t q) const { return fz_.at(q); }

    /// U <- g U.
    void apply(const Gate& g) {
        g.validate(n_);
        for (auto& p : fx_) {
            conjugate_by_gate(p, g);
        }
        for (auto& p : fz_) {
            conjugate_by_gate(p, g);
        }
        // (gU)^dagger X_q (gU) = U^dagger (g^dagger X_q g) U; only the gate's qubits change.
        std::vector<std::uint32_t> touched{g.q0};
        if (g.two_qubit()) {
            touched.push_back(g.q1);
        }
        std::vector<Pauli> new_x, new_z;
        for (auto q : touched) {
            Pauli px = Pauli::single(n_, q, 'X');
            Pauli pz = Pauli::single(n_, q, 'Z');
            conjugate_by_gate_inverse(px, g);
            conjugate_by_gate_inverse(pz, g);
            new_x.push_back(conjugate_inverse(px));
            new_z.push_back(conjugate_inverse(pz));
        }
        for (std::size_t k = 0; k < touched.size(); ++k) {
            ix_[touched[k]] = std::move(new_x[k]);
            iz_[touched[k]] = std::move(new_z[k]);
        }
    }

    /// U p U^dagger.
    Pauli conjugate(const Pauli& p) const { return map(p, fx_, fz_); }

    /// U^dagger p U.
    Pauli conjugate_inverse(const Pauli& p) const { return map(p, ix_, iz_); }

    /// Images preserve the commutation relations of the generators.
    bool is_symplectic() const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const bool expect_xz = i != j;
                if (!commutes(fx_[i], fx_[j]) || !commutes(fz_[i], fz_[j]) || commutes(fx_[i], fz_[j]) == !expect_xz) {
                    return false;
                }
            }
        }
        return true;
    }

    bool operator==(const CliffordTableau&) const = default;

  private:
    Pauli map(const Pauli& p, const std::vector<Pauli>& xs, const std::vector<Pauli>& zs) const {
        if (p.num_qubits() != n_) {
            throw std::invalid_argument("CliffordTableau: Pauli qubit count differs");
        }
        Pauli out(n_);
        out.set_phase(p.phase());
        for (std::size_t q = 0; q < n_; ++q) {
            const bool x = p.x(q), z = p.z(q);
            if (x && z) {
                // Y = i X Z.
                out = out * xs[q] * zs[q];
                out.set_phase(out.phase() + 1);
            } else if (x) {
                out = out * xs[q];
            } else if (z) {
                out = out * zs[q];
            }
        }
        return out;
    }

    std::size_t n_ = 0;
    std::vector<Pauli> fx_, fz_, ix_, iz_;
};

/// U p U^dagger (the tableau fast path).
inline Pauli tableau_conjugate(const CliffordTableau& tab, const Pauli& p) { return tab.conjugate(p); }

}  // namespace hpdecode
