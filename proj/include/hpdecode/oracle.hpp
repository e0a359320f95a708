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

// Statevector simulation of the decoding protocol, used as ground truth for
// the closed-form fidelities.
//
// Recovery layout (m = 2n + 2 n_A qubits), registers in this order:
//
//   R | A | B | B' | A' | R'
//
// |RA>, |BB'> and |A'R'> start as EPR pairs. U acts on (A, B); its outputs C
// and D are the first n_C and last n_D of those wires. V* (the entrywise
// conjugate of V) acts with its A-qubits on A' and its B-qubits on B'; its
// outputs C' and D' are split the same way over that wire list. D and D' are
// post-selected onto EPR pairs and the fidelity is the EPR overlap of (R, R').

#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "hpdecode/linalg.hpp"
#include "hpdecode/partition.hpp"

namespace hpdecode {

struct ProtocolLayout {
    std::size_t m = 0;
    std::vector<std::size_t> r, a, b, b_prime, a_prime, r_prime;

    /// Wires U acts on (A then B) and wires V* acts on (A' then B').
    std::vector<std::size_t> u_wires() const { return concat(a, b); }
    std::vector<std::size_t> v_wires() const { return concat(a_prime, b_prime); }

    static ProtocolLayout recovery(const Partition& part) { return build(part, true); }

    /// Teleportation layout: A | B | B' | A' | R', with psi loaded on A.
    static ProtocolLayout teleport(const Partition& part) { return build(part, false); }

  private:
    static std::vector<std::size_t> concat(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
        std::vector<std::size_t> out = x;
        out.insert(out.end(), y.begin(), y.end());
        return out;
    }

    static ProtocolLayout build(const Partition& part, bool with_reference) {
        ProtocolLayout l;
        std::size_t next = 0;
        auto take = [&next](std::size_t count) {
            std::vector<std::size_t> w(count);
            std::iota(w.begin(), w.end(), next);
            next += count;
            return w;
        };
        if (with_reference) {
            l.r = take(part.n_a);
        }
        l.a = take(part.n_a);
        l.b = take(part.n_b());
        l.b_prime = take(part.n_b());
        l.a_prime = take(part.n_a);
        l.r_prime = take(part.n_a);
        l.m = next;
        return l;
    }
};

namespace detail {

/// Product of EPR pairs on (first[k], second[k]) times `rest` on the remaining wires.
inline StateVector paired_state(std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                const std::vector<std::size_t>& rest_wires, const StateVector* rest) {
    check_state_qubits(m, "paired_state");
    const std::size_t np = pairs.size();
    const std::size_t nr = rest_wires.size();
    std::vector<cplx> amps(qubit_dim(m), 0.0);
    const double amp = 1.0 / std::sqrt(static_cast<double>(qubit_dim(np)));
    for (std::uint64_t v = 0; v < qubit_dim(np); ++v) {
        std::uint64_t base = 0;
        for (std::size_t k = 0; k < np; ++k) {
            if ((v >> (np - 1 - k)) & 1u) {
                base |= qubit_bit(m, pairs[k].first) | qubit_bit(m, pairs[k].second);
            }
        }
        if (nr == 0) {
            amps[base] = amp;
            continue;
        }
        for (std::uint64_t w = 0; w < qubit_dim(nr); ++w) {
            std::uint64_t idx = base;
            for (std::size_t k = 0; k < nr; ++k) {
                if ((w >> (nr - 1 - k)) & 1u) {
                    idx |= qubit_bit(m, rest_wires[k]);
                }
            }
            amps[idx] = amp * (*rest)[w];
        }
    }
    return StateVector::from_amplitudes(std::move(amps));
}

inline std::vector<std::pair<std::size_t, std::size_t>> zip(const std::vector<std::size_t>& x,
                                                            const std::vector<std::size_t>& y) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < x.size(); ++k) {
        out.emplace_back(x[k], y[k]);
    }
    return out;
}

template <typename T>
std::vector<T> join(std::vector<T> x, const std::vector<T>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
}

/// Applies U to its wires and V* to its wires, then projects D and D' onto EPR pairs.
inline Projection run_decoder(StateVector s, const DenseUnitary& u, const DenseUnitary& v, const Partition& part,
                              const ProtocolLayout& l) {
    const auto uw = l.u_wires();
    const auto vw = l.v_wires();
    apply_matrix(u.matrix(), uw, s);
    apply_matrix(v.matrix().conjugate(), vw, s);
    const Region d(std::vector<std::size_t>(uw.begin() + static_cast<std::ptrdiff_t>(part.n_c), uw.end()));
    const Region d_prime(std::vector<std::size_t>(vw.begin() + static_cast<std::ptrdiff_t>(part.n_c), vw.end()));
    return project_epr(s, d, d_prime);
}

inline void check_oracle_inputs(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    if (u.num_qubits() != part.n || v.num_qubits() != part.n) {
        throw std::invalid_argument("decoder oracle: U and V must match the partition");
    }
    if (part.n_a == 0) {
        throw std::invalid_argument("decoder oracle: need n_a >= 1");
    }
}

}  // namespace detail

struct ProtocolState {
    StateVector state;
    double p_out = 0.0;
    ProtocolLayout layout;
};

/// Post-selected recovery state and its normalization P_out.
inline ProtocolState build_protocol_state(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    detail::check_oracle_inputs(u, v, part);
    const auto l = ProtocolLayout::recovery(part);
    check_state_qubits(l.m, "build_protocol_state");
    const auto pairs = detail::join(detail::join(detail::zip(l.r, l.a), detail::zip(l.b, l.b_prime)),
                                    detail::zip(l.a_prime, l.r_prime));
    auto s = detail::paired_state(l.m, pairs, {}, nullptr);
    auto pr = detail::run_decoder(std::move(s), u, v, part, l);
    return {std::move(pr.state), pr.probability, l};
}

/// EPR overlap of (R, R') in the post-selected recovery state.
inline double oracle_fidelity(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    const auto ps = build_protocol_state(u, v, part);
    return epr_overlap(ps.state, Region(ps.layout.r), Region(ps.layout.r_prime));
}

/// <psi| rho_R' |psi> after teleporting |psi> from A through the decoder.
inline double oracle_teleport(const DenseUnitary& u, const DenseUnitary& v, const StateVector& psi,
                              const Partition& part) {
    detail::check_oracle_inputs(u, v, part);
    if (psi.num_qubits() != part.n_a) {
        throw std::invalid_argument("oracle_teleport: psi must live on A");
    }
    const auto l = ProtocolLayout::teleport(part);
    check_state_qubits(l.m, "oracle_teleport");
    const auto pairs = detail::join(detail::zip(l.b, l.b_prime), detail::zip(l.a_prime, l.r_prime));
    auto s = detail::paired_state(l.m, pairs, l.a, &psi);
    const auto pr = detail::run_decoder(std::move(s), u, v, part, l);
    const Matrix rho = reduced_density(pr.state, Region(l.r_prime));
    cplx f = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        for (std::size_t j = 0; j < psi.dim(); ++j) {
            f += std::conj(psi[i]) * rho(i, j) * psi[j];
        }
    }
    return f.real();
}

/// (I_R (x) U_AB) |RA>|BB'> on registers R | A | B | B' (2n qubits). After U
/// the A|B wires hold C|D.
inline StateVector build_hp_state(const DenseUnitary& u, const Partition& part) {
    if (u.num_qubits() != part.n) {
        throw std::invalid_argument("build_hp_state: U does not match the partition");
    }
    const std::size_t n = part.n, na = part.n_a, nb = part.n_b();
    const std::size_t m = 2 * n;
    check_state_qubits(m, "build_hp_state");
    std::vector<std::size_t> r(na), a(na), b(nb), bp(nb);
    std::iota(r.begin(), r.end(), 0);
    std::iota(a.begin(), a.end(), na);
    std::iota(b.begin(), b.end(), 2 * na);
    std::iota(bp.begin(), bp.end(), na + n);
    auto s = detail::paired_state(m, detail::join(detail::zip(r, a), detail::zip(b, bp)), {}, nullptr);
    apply_matrix(u.matrix(), detail::join(a, b), s);
    return s;
}

/// Wires of R and C in the state from build_hp_state.
inline Region hp_rc_region(const Partition& part) { return Region::range(0, part.n_a + part.n_c); }

/// -log2 tr(rho^2) of the reduced state on `region`.
inline double renyi2_entropy(const StateVector& s, const Region& region) {
    const Matrix rho = reduced_density(s, region);
    double purity = 0.0;
    for (std::size_t i = 0; i < rho.rows(); ++i) {
        for (std::size_t j = 0; j < rho.cols(); ++j) {
            purity += std::norm(rho(i, j));
        }
    }
    return -std::log2(purity);
}

}  // namespace hpdecode
