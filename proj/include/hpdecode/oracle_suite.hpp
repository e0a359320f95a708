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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hpdecode/circuit.hpp"
#include "hpdecode/fidelity.hpp"
#include "hpdecode/oracle.hpp"
#include "hpdecode/scrambling.hpp"

namespace hpdecode {

struct OracleSuiteReport {
    std::size_t pairs = 0;
    std::size_t degenerate = 0;
    double max_fidelity_diff = 0.0;
    double max_teleport_diff = 0.0;
    double max_ideal_identity_diff = 0.0;
    double max_p_out_identity_diff = 0.0;

    bool ok(double tol) const {
        return max_fidelity_diff <= tol && max_teleport_diff <= tol && max_ideal_identity_diff <= tol &&
               max_p_out_identity_diff <= tol;
    }
};

/// Closed-form fidelities against the statevector decoder on random doped
/// pairs: n in [n_min, n_max], t in [0, t_max], every (n_A, n_C) with
/// 1 <= n_A <= 2 and 1 <= n_C <= 2, cycling through the grid.
inline OracleSuiteReport run_oracle_suite(std::size_t pairs, std::uint64_t seed, std::size_t n_min = 4,
                                          std::size_t n_max = 6, std::size_t t_max = 4) {
    OracleSuiteReport rep;
    std::vector<Partition> parts;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        for (std::size_t na = 1; na <= 2; ++na) {
            for (std::size_t nc = 1; nc <= 2; ++nc) {
                parts.emplace_back(n, na, nc);
            }
        }
    }
    for (std::size_t k = 0; k < pairs; ++k) {
        const Partition& part = parts[k % parts.size()];
        const std::size_t t = (k / parts.size()) % (t_max + 1);
        Rng rng(derive_seed(seed, k));
        const DenseUnitary u = synthesize_dense(sample_doped_circuit(part.n, t, default_gates_per_layer(part.n), rng));
        const DenseUnitary v = synthesize_dense(sample_doped_circuit(part.n, t, default_gates_per_layer(part.n), rng));
        const StateVector psi = haar_state(part.n_a, rng);
        const double f_oracle = oracle_fidelity(u, v, part);
        try {
            rep.max_fidelity_diff = std::max(rep.max_fidelity_diff, std::abs(fidelity(u, v, part) - f_oracle));
        } catch (const DegenerateCostError&) {
            ++rep.degenerate;
            rep.max_fidelity_diff = std::max(rep.max_fidelity_diff, std::abs(f_oracle));
        }
        try {
            rep.max_teleport_diff = std::max(
                rep.max_teleport_diff, std::abs(teleport_fidelity(u, v, psi, part) - oracle_teleport(u, v, psi, part)));
        } catch (const DegenerateCostError&) {
        }
        const auto ideal = build_protocol_state(u, u, part);
        const double f_ideal = epr_overlap(ideal.state, Region(ideal.layout.r), Region(ideal.layout.r_prime));
        const double da2 = static_cast<double>(part.d_a() * part.d_a());
        rep.max_ideal_identity_diff =
            std::max(rep.max_ideal_identity_diff, std::abs(fidelity(u, u, part) * da2 * omega_exact(u, part) - 1.0));
        rep.max_p_out_identity_diff = std::max(rep.max_p_out_identity_diff, std::abs(f_ideal * ideal.p_out - 1.0 / da2));
        ++rep.pairs;
    }
    return rep;
}

}  // namespace hpdecode
