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
// Learns a decoder for one scrambler and checks it against the statevector
// simulation of the decoding protocol.
//
//   decode_demo [n] [t] [seed]

#include <cstdio>
#include <cstdlib>

#include "hpdecode.hpp"

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 6;
    const std::size_t t = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 0;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;
    if (n < 2 || n > 8) {
        std::fprintf(stderr, "usage: decode_demo [n in 2..8] [t] [seed]\n");
        return 1;
    }
    const hpdecode::Partition part(n, 1, 1);
    hpdecode::Rng rng(seed);
    const auto u_circ = hpdecode::sample_doped_circuit(n, t, hpdecode::default_gates_per_layer(n), rng);
    const auto u = hpdecode::synthesize_dense(u_circ);

    std::printf("scrambler: n=%zu, %zu T gates, %zu gates\n", n, t, u_circ.size());
    std::printf("Omega(U)          %.6f (plateau %.6f)\n", hpdecode::omega_exact(u, part),
                part.scrambling_plateau());
    std::printf("ideal fidelity    %.6f\n", hpdecode::ideal_fidelity(u, part));

    hpdecode::AnnealConfig cfg;
    cfg.seed = hpdecode::derive_seed(seed, 2);
    const auto res = hpdecode::train(u_circ, part, cfg);
    const auto v = hpdecode::synthesize_dense(res.v);
    std::printf("learned decoder   %zu gates after %zu steps (%zu accepted)\n", res.v.size(), res.steps,
                res.accepted);
    std::printf("fidelity          %.6f\n", res.final_fidelity);
    std::printf("oracle fidelity   %.6f\n", hpdecode::oracle_fidelity(u, v, part));
    std::printf("overlap with U    %.6f\n", res.overlap_uv);

    const auto psi = hpdecode::haar_state(part.n_a, rng);
    try {
        std::printf("teleport psi      %.6f (oracle %.6f)\n", hpdecode::teleport_fidelity(u, v, psi, part),
                    hpdecode::oracle_teleport(u, v, psi, part));
    } catch (const hpdecode::DegenerateCostError&) {
        std::printf("teleport psi      post-selection probability is zero\n");
    }
    return 0;
}
