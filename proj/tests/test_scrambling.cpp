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

#include "hpdecode/scrambling.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace hpdecode;
using namespace hpdecode::testing;

namespace {

// (1/d) tr(P_A U^dagger P_D U P_A U^dagger P_D U) from kron-built matrices.
double dense_otoc4(const DenseUnitary& u, const Pauli& pa, const Pauli& pd) {
    const Matrix a = dense_pauli(pa);
    const Matrix h = u.matrix().adjoint() * dense_pauli(pd) * u.matrix();
    const cplx tr = (a * h * a * h).trace();
    EXPECT_LT(std::abs(tr.imag()), 1e-9);
    return tr.real() / static_cast<double>(u.dim());
}

// Average of otoc4 over every (P_A, P_D) pair.
double omega_double_enumeration(const DenseUnitary& u, const Partition& part) {
    double s = 0.0;
    std::size_t count = 0;
    for (const auto& pa : enumerate_region(part.n, part.a())) {
        for (const auto& pd : enumerate_region(part.n, part.d_region())) {
            s += dense_otoc4(u, pa, pd);
            ++count;
        }
    }
    return s / static_cast<double>(count);
}

DenseUnitary random_clifford_unitary(std::size_t n, Rng& rng) {
    return synthesize_dense(sample_random_clifford(n, 3 * n * n, rng));
}

}  // namespace

TEST(otoc4, trivial_examples) {
    const auto id = DenseUnitary::identity(3);
    EXPECT_NEAR(otoc4(id, Pauli::from_string("XII"), Pauli::from_string("IIZ")), 1.0, 1e-14);
    EXPECT_NEAR(otoc4(id, Pauli::from_string("XII"), Pauli::from_string("ZII")), -1.0, 1e-14);
    const Partition part(3, 1, 1);
    EXPECT_THROW(otoc4(id, part, Pauli::from_string("IXI"), Pauli::from_string("IIZ")), std::invalid_argument);
    EXPECT_THROW(otoc4(id, part, Pauli::from_string("XII"), Pauli::from_string("ZII")), std::invalid_argument);
}

TEST(otoc4, matches_dense_for_random_unitaries) {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = haar_unitary(3, rng);
        const Pauli p1 = random_pauli(3, Region::range(0, 3), rng);
        const Pauli p2 = random_pauli(3, Region::range(0, 3), rng);
        EXPECT_NEAR(otoc4(u, p1, p2), dense_otoc4(u, p1, p2), 1e-12);
    }
}

TEST(otoc4, clifford_values_are_signs) {
    Rng rng(9);
    const Partition part(4, 1, 1);
    for (int rep = 0; rep < 30; ++rep) {
        const auto u = random_clifford_unitary(4, rng);
        const double v = otoc4(u, part, random_pauli(4, part.a(), rng), random_pauli(4, part.d_region(), rng));
        EXPECT_NEAR(std::abs(v), 1.0, 1e-10);
    }
}

TEST(omega, identity_examples) {
    const auto id = DenseUnitary::identity(10);
    EXPECT_NEAR(omega_exact(id, Partition(10, 2, 2)), 1.0, 1e-12);
    EXPECT_NEAR(omega_exact(id, Partition(10, 2, 1)), 0.25, 1e-12);
}

TEST(omega, exact_equals_double_enumeration) {
    Rng rng(13);
    for (const auto& part : {Partition(3, 1, 1), Partition(4, 2, 1), Partition(4, 1, 2), Partition(5, 2, 2)}) {
        for (int rep = 0; rep < 2; ++rep) {
            const auto u = rep == 0 ? random_clifford_unitary(part.n, rng) : haar_unitary(part.n, rng);
            EXPECT_NEAR(omega_exact(u, part), omega_double_enumeration(u, part), 1e-10);
        }
    }
}

TEST(omega, global_phase_invariance) {
    Rng rng(17);
    const Partition part(5, 2, 1);
    const auto u = haar_unitary(5, rng);
    EXPECT_NEAR(omega_exact(u.with_global_phase(2.2), part), omega_exact(u, part), 1e-12);
}

TEST(omega, sampled_agrees_with_exact) {
    Rng rng(19);
    const Partition part(6, 2, 2);
    const auto u = random_clifford_unitary(6, rng);
    const auto est = omega_direct_sampled(u, part, 2000, rng);
    EXPECT_LT(std::abs(est.value - omega_exact(u, part)), 3.0 * est.std_error + 1e-12);
    const auto one = omega_direct_sampled(u, part, 1, rng);
    EXPECT_NEAR(std::abs(one.value), 1.0, 1e-10);
    const auto id = omega_direct_sampled(DenseUnitary::identity(6), part, 50, rng);
    EXPECT_EQ(id.value, 1.0);
    EXPECT_EQ(id.std_error, 0.0);
    EXPECT_THROW(omega_direct_sampled(u, part, 0, rng), std::invalid_argument);
}

TEST(omega, clifford_residual_is_small) {
    Rng rng(23);
    const Partition part(8, 2, 2);
    for (int rep = 0; rep < 3; ++rep) {
        const auto u = random_clifford_unitary(8, rng);
        const double f = scrambling_residual(omega_exact(u, part), part);
        EXPECT_LE(std::abs(f), 10.0 / static_cast<double>(part.d()));
    }
}

TEST(otoc8, exact_and_sampled) {
    Rng rng(29);
    const auto id = DenseUnitary::identity(4);
    EXPECT_EQ(otoc8(id, Pauli::from_string("XIII"), Pauli::from_string("IIIZ"), Otoc8Mode::exact).value, 1.0);
    const auto cl = random_clifford_unitary(4, rng);
    EXPECT_NEAR(otoc8(cl, Pauli::from_string("XIII"), Pauli::from_string("IIZI"), Otoc8Mode::exact).value, 1.0,
                1e-10);
    EXPECT_THROW(otoc8(id, Pauli(4), Pauli::from_string("IIIZ"), Otoc8Mode::exact), std::invalid_argument);
    EXPECT_THROW(otoc8(id, Pauli::from_string("XIII"), Pauli::from_string("IIIZ"), Otoc8Mode::sampled),
                 std::invalid_argument);
    const auto u = synthesize_dense(sample_doped_circuit(4, 2, 48, rng));
    const Pauli p1 = Pauli::from_string("XIII"), p2 = Pauli::from_string("IIZI");
    const double want = otoc8(u, p1, p2, Otoc8Mode::exact).value;
    const auto got = otoc8(u, p1, p2, Otoc8Mode::sampled, 500, &rng);
    EXPECT_LT(std::abs(got.value - want), 3.0 * got.std_error + 1e-12);
}

TEST(otoc8, sampled_term_matches_dense) {
    // With the full-group twirl replaced by an exhaustive average the two modes coincide.
    Rng rng(31);
    const auto u = haar_unitary(2, rng);
    const Pauli p1 = Pauli::from_string("XI"), p2 = Pauli::from_string("IY");
    const Matrix a = dense_pauli(p1);
    const Matrix h = u.matrix().adjoint() * dense_pauli(p2) * u.matrix();
    const Matrix w = a * h * a * h;
    double avg = 0.0;
    const auto all = enumerate_region(2, Region::range(0, 2));
    for (const auto& p : all) {
        const Matrix pm = dense_pauli(p);
        avg += (w * pm * w * pm).trace().real() / 4.0;
    }
    avg /= static_cast<double>(all.size());
    EXPECT_NEAR(avg, std::pow(otoc4(u, p1, p2), 2), 1e-12);
}

TEST(scrambling, mutual_info_bound_examples) {
    EXPECT_NEAR(mutual_info_bound(1.0 / 16.0, 2), 0.0, 1e-14);
    EXPECT_NEAR(mutual_info_bound(0.25, 1), 0.0, 1e-14);
    EXPECT_NEAR(mutual_info_bound(1.0, 2), -4.0, 1e-14);
    EXPECT_THROW(mutual_info_bound(0.0, 2), std::invalid_argument);
}

TEST(scrambling, is_scrambling_examples) {
    Rng rng(37);
    const Partition part(8, 2, 2);
    EXPECT_FALSE(is_scrambling(DenseUnitary::identity(8), part, 0.01));
    EXPECT_TRUE(is_scrambling(DenseUnitary::identity(8), part, 2.0));
    EXPECT_TRUE(is_scrambling(random_clifford_unitary(8, rng), part, 0.02));
    EXPECT_THROW(is_scrambling(DenseUnitary::identity(8), part, 0.0), std::invalid_argument);
}

TEST(scrambling, plateau_value) {
    EXPECT_NEAR(Partition(10, 2, 2).scrambling_plateau(), 0.0625 + std::pow(2.0, -16) - std::pow(2.0, -20), 1e-15);
}

TEST(delta_omega, small_ensembles) {
    const Partition part(4, 1, 1);
    const auto two = delta_omega_estimate(0, part, 2, 5);
    EXPECT_TRUE(std::isfinite(two.variance));
    EXPECT_GE(two.variance, 0.0);
    const auto a = delta_omega_estimate(1, part, 12, 99, 0, 1);
    const auto b = delta_omega_estimate(1, part, 12, 99, 0, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.variance, b.variance);
    EXPECT_THROW(delta_omega_estimate(0, part, 1, 5), std::invalid_argument);
}

TEST(delta_omega, matches_direct_sample_statistics) {
    const Partition part(3, 1, 1);
    const std::size_t ensemble = 6, t = 2, seed = 4;
    std::vector<double> w;
    for (std::size_t k = 0; k < ensemble; ++k) {
        Rng rng(derive_seed(seed, t, k));
        w.push_back(omega_exact(synthesize_dense(sample_doped_circuit(3, t, default_gates_per_layer(3), rng)), part));
    }
    double mean = 0.0;
    for (double x : w) mean += x;
    mean /= ensemble;
    double var = 0.0;
    for (double x : w) var += (x - mean) * (x - mean);
    var /= ensemble - 1;
    const auto est = delta_omega_estimate(t, part, ensemble, seed);
    EXPECT_NEAR(est.mean, mean, 1e-14);
    EXPECT_NEAR(est.variance, var, 1e-14);
}
