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

#include "hpdecode/fidelity.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace hpdecode;
using namespace hpdecode::testing;

namespace {

// Cost from dense products U^dagger P_C V P_A, no index actions.
CostBreakdown dense_cost(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    double n = 0.0, m = 0.0;
    const auto pas = enumerate_region(part.n, part.a());
    for (const auto& pc : enumerate_region(part.n, part.c())) {
        for (std::size_t ia = 0; ia < pas.size(); ++ia) {
            const double w = std::norm(dense_trace_product(u, v, pc, pas[ia]).trace());
            (ia == 0 ? n : m) += w;
        }
    }
    return CostBreakdown::from_sums(n, m);
}

DenseUnitary random_clifford_unitary(std::size_t n, Rng& rng) {
    return synthesize_dense(sample_random_clifford(n, 3 * n * n, rng));
}

}  // namespace

TEST(kernel, planar_round_trip) {
    Rng rng(3);
    const Matrix m = random_matrix(8, rng);
    EXPECT_EQ(max_abs_diff(PlanarMatrix::from(m).to_matrix(), m), 0.0);
}

TEST(kernel, planar_gate_matches_dense) {
    Rng rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 1 + rng.uniform_below(4);
        const Matrix m = random_matrix(qubit_dim(n), rng);
        const Gate g = rep % 7 == 0 ? Gate::t(rng.uniform_below(n)) : propose_clifford_gate(n, rng);
        PlanarMatrix p = PlanarMatrix::from(m);
        detail::apply_gate_planar(g, n, p);
        EXPECT_LT(max_abs_diff(p.to_matrix(), dense_gate(g, n) * m), 1e-13) << g.str();
        PlanarMatrix q = PlanarMatrix::from(m);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::vector<double> re(m.cols()), im(m.cols());
            detail::gate_row(g, n, q, r, re.data(), im.data());
            for (std::size_t c = 0; c < m.cols(); ++c) {
                EXPECT_EQ(re[c], p.row_re(r)[c]);
                EXPECT_EQ(im[c], p.row_im(r)[c]);
            }
        }
    }
}

TEST(kernel, sandwich_traces_match_dense) {
    Rng rng(11);
    for (const auto& part : {Partition(3, 1, 1), Partition(4, 2, 1), Partition(4, 1, 2), Partition(3, 0, 2),
                             Partition(3, 2, 0), Partition(4, 2, 2)}) {
        const auto u = haar_unitary(part.n, rng);
        const auto v = haar_unitary(part.n, rng);
        const Matrix theta = block_gram(u, v, part);
        const SandwichTraces traces(part);
        const auto pcs = enumerate_region(part.n, part.c());
        const auto pas = enumerate_region(part.n, part.a());
        ASSERT_EQ(traces.num_c(), pcs.size());
        ASSERT_EQ(traces.num_a(), pas.size());
        for (std::size_t ic = 0; ic < pcs.size(); ++ic) {
            for (std::size_t ia = 0; ia < pas.size(); ++ia) {
                const cplx want = dense_trace_product(u, v, pcs[ic], pas[ia]).trace();
                EXPECT_LT(std::abs(traces.trace(theta, ic, ia) - want), 1e-11);
            }
            const Matrix y = partial_trace(u.matrix().adjoint() * dense_pauli(pcs[ic]) * v.matrix(), part.n, part.a());
            EXPECT_LT(max_abs_diff(traces.reduced_on_a(theta, ic), y), 1e-11);
        }
    }
}

TEST(fidelity, identity_pair_values) {
    const auto id = DenseUnitary::identity(4);
    const auto b = cost(id, id, Partition(4, 2, 1));
    EXPECT_NEAR(b.cost, 3.0, 1e-12);
    EXPECT_NEAR(b.fidelity, 0.25, 1e-12);
    const auto b2 = cost(id, id, Partition(4, 2, 2));
    EXPECT_NEAR(b2.fidelity, 1.0 / 16.0, 1e-12);
    // A inside C: Omega = 1 and F = 1 / d_A^2.
    const auto b3 = cost(id, id, Partition(4, 1, 2));
    EXPECT_NEAR(b3.fidelity, 0.25, 1e-12);
}

TEST(fidelity, literal_fast_and_dense_agree) {
    Rng rng(21);
    for (const auto& part : {Partition(3, 1, 1), Partition(4, 2, 1), Partition(5, 2, 2), Partition(5, 1, 3)}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto u = rep == 0 ? random_clifford_unitary(part.n, rng) : haar_unitary(part.n, rng);
            const auto v = haar_unitary(part.n, rng);
            const auto want = dense_cost(u, v, part);
            const auto lit = cost(u, v, part);
            const auto fast = fast_cost(u, v, part);
            EXPECT_NEAR(lit.numerator, want.numerator, 1e-9 * want.numerator);
            EXPECT_NEAR(lit.mixed, want.mixed, 1e-9 * (1.0 + want.mixed));
            EXPECT_NEAR(fast.fidelity, lit.fidelity, 1e-12);
            EXPECT_NEAR(fast.cost, lit.cost, 1e-10 * (1.0 + lit.cost));
        }
    }
}

TEST(fidelity, range_and_global_phase_invariance) {
    Rng rng(23);
    const Partition part(4, 2, 1);
    for (int rep = 0; rep < 10; ++rep) {
        const auto u = haar_unitary(4, rng);
        const auto v = haar_unitary(4, rng);
        const double f = fidelity(u, v, part);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0 + 1e-12);
        EXPECT_NEAR(fidelity(u.with_global_phase(0.7), v.with_global_phase(-1.9), part), f, 1e-12);
    }
}

TEST(fidelity, cost_after_gate_matches_fresh) {
    Rng rng(29);
    const Partition part(5, 2, 1);
    const auto u = synthesize_dense(sample_doped_circuit(5, 2, 20, rng));
    auto v = synthesize_dense(sample_random_clifford(5, 10, rng));
    auto current = fast_cost(u, v, part);
    for (int step = 0; step < 30; ++step) {
        const Gate g = step % 5 == 4 ? Gate::t(rng.uniform_below(5)) : propose_clifford_gate(5, rng);
        const auto after = cost_after_gate(u, v, current, g, part);
        DenseUnitary gv = v;
        apply_gate(g, gv);
        const auto fresh = cost(u, gv, part);
        EXPECT_NEAR(after.fidelity, fresh.fidelity, 1e-12);
        v = gv;
        current = after;
    }
}

TEST(fidelity, self_inverse_gate_sequences_leave_cost_unchanged) {
    Rng rng(31);
    const Partition part(4, 2, 1);
    const auto u = haar_unitary(4, rng);
    const auto v = haar_unitary(4, rng);
    const auto base = cost(u, v, part);
    DenseUnitary w = v;
    apply_gate(Gate::h(2), w);
    apply_gate(Gate::h(2), w);
    EXPECT_NEAR(cost(u, w, part).cost, base.cost, 1e-12);
    for (int k = 0; k < 4; ++k) {
        apply_gate(Gate::p(1), w);
    }
    EXPECT_NEAR(cost(u, w, part).cost, base.cost, 1e-12);
    apply_gate(Gate::cnot(0, 3), w);
    apply_gate(Gate::cnot(0, 3), w);
    EXPECT_NEAR(cost(u, w, part).cost, base.cost, 1e-12);
}

TEST(fidelity, ideal_decoder_matches_omega) {
    Rng rng(37);
    for (const auto& part : {Partition(4, 1, 1), Partition(5, 2, 1), Partition(5, 2, 2)}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto u = rep == 0 ? random_clifford_unitary(part.n, rng) : haar_unitary(part.n, rng);
            const double da = static_cast<double>(part.d_a());
            EXPECT_NEAR(fidelity(u, u, part) * da * da * omega_exact(u, part), 1.0, 1e-10);
            EXPECT_NEAR(ideal_fidelity(u, part), fidelity(u, u, part), 1e-10);
        }
    }
}

TEST(fidelity, degenerate_numerator_throws) {
    // With n_C = 0, N = |tr(U^dagger V)|^2, which vanishes for V = U Z_0.
    const Partition part(2, 1, 0);
    const auto u = DenseUnitary::identity(2);
    const auto v = DenseUnitary::from_matrix(dense_pauli(Pauli::from_string("ZI")));
    EXPECT_THROW(cost(u, v, part), DegenerateCostError);
    EXPECT_THROW(fast_cost(u, v, part), DegenerateCostError);
}

TEST(fidelity, learnability_overlap_examples) {
    Rng rng(41);
    const auto u = haar_unitary(3, rng);
    EXPECT_NEAR(learnability_overlap(u, u), 8.0, 1e-10);
    EXPECT_NEAR(learnability_overlap(u, u.with_global_phase(1.3)), 8.0, 1e-10);
    const auto id = DenseUnitary::identity(3);
    const auto z = DenseUnitary::from_matrix(dense_pauli(Pauli::from_string("ZII")));
    EXPECT_NEAR(learnability_overlap(id, z), 0.0, 1e-14);
}

TEST(fidelity, teleport_range_and_perfect_decoder) {
    Rng rng(43);
    const Partition part(4, 1, 2);
    const auto psi = haar_state(1, rng);
    for (int rep = 0; rep < 5; ++rep) {
        const auto u = haar_unitary(4, rng);
        const auto v = haar_unitary(4, rng);
        const double f = teleport_fidelity(u, v, psi, part);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0 + 1e-12);
    }
}
