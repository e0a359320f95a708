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
#include <stdexcept>
#include <thread>
#include <vector>

#include "hpdecode/circuit.hpp"
#include "hpdecode/linalg.hpp"
#include "hpdecode/partition.hpp"
#include "hpdecode/pauli.hpp"
#include "hpdecode/rng.hpp"
#include "hpdecode/trace_kernel.hpp"

namespace hpdecode {

/// Uniformly random phase-free Pauli supported on `r`.
inline Pauli random_pauli(std::size_t n, const Region& r, Rng& rng) {
    static constexpr std::pair<bool, bool> kLetters[4] = {{false, false}, {true, false}, {true, true}, {false, true}};
    Pauli p(n);
    for (auto q : r) {
        const auto [x, z] = kLetters[rng.uniform_below(4)];
        p.set(q, x, z);
    }
    return p;
}

namespace detail {

/// P M for a dense M, by row permutation and phases.
inline Matrix pauli_times(const Pauli& p, const Matrix& m) {
    PauliAction act(p);
    Matrix out(m.rows(), m.cols());
    // (P M)[i, :] = phase(i ^ x) M[i ^ x, :]
    for (std::uint64_t i = 0; i < m.rows(); ++i) {
        const std::uint64_t src = act.target(i);
        const cplx ph = act.phase(src);
        const cplx* in = m.row(src).data();
        cplx* o = out.row(i).data();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            o[j] = ph * in[j];
        }
    }
    return out;
}

/// Heisenberg-evolved U^dagger P U.
inline Matrix heisenberg(const DenseUnitary& u, const Pauli& p) { return u.matrix().adjoint() * pauli_times(p, u.matrix()); }

}  // namespace detail

/// (1/d) tr(P1 U^dagger P2 U P1 U^dagger P2 U) for arbitrary Paulis.
inline double otoc4(const DenseUnitary& u, const Pauli& p1, const Pauli& p2) {
    if (p1.num_qubits() != u.num_qubits() || p2.num_qubits() != u.num_qubits()) {
        throw std::invalid_argument("otoc4: qubit counts differ");
    }
    const Matrix m = detail::pauli_times(p1, detail::heisenberg(u, p2));
    cplx tr = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            tr += m(i, j) * m(j, i);
        }
    }
    return tr.real() / static_cast<double>(u.dim());
}

/// otoc4 with P_A checked against A and P_D against D.
inline double otoc4(const DenseUnitary& u, const Partition& part, const Pauli& p_a, const Pauli& p_d) {
    if (!p_a.supported_in(part.a())) {
        throw std::invalid_argument("otoc4: P_A " + p_a.str() + " is not supported in A");
    }
    if (!p_d.supported_in(part.d_region())) {
        throw std::invalid_argument("otoc4: P_D " + p_d.str() + " is not supported in D");
    }
    return otoc4(u, p_a, p_d);
}

/// Omega(U) = (1/(d^2 d_A^2)) sum_{P_C, P_A} |tr(U^dagger P_C U P_A)|^2, via the block-Gram contraction.
inline double omega_exact(const DenseUnitary& u, const Partition& part) {
    if (u.num_qubits() != part.n) {
        throw std::invalid_argument("omega_exact: U does not match the partition");
    }
    const Matrix theta = block_gram(u, u, part);
    const SandwichTraces traces(part);
    double s = 0.0;
    for (const auto& t : traces.all(theta)) {
        s += std::norm(t);
    }
    const double d = static_cast<double>(part.d()), da = static_cast<double>(part.d_a());
    return s / (d * d * da * da);
}

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo average of otoc4 over uniform (P_A, P_D).
inline Estimate omega_direct_sampled(const DenseUnitary& u, const Partition& part, std::size_t n_samples, Rng& rng) {
    if (n_samples == 0) {
        throw std::invalid_argument("omega_direct_sampled: need at least one sample");
    }
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const Pauli pa = random_pauli(part.n, part.a(), rng);
        const Pauli pd = random_pauli(part.n, part.d_region(), rng);
        const double v = otoc4(u, pa, pd);
        sum += v;
        sum_sq += v * v;
    }
    const double nn = static_cast<double>(n_samples);
    const double mean = sum / nn;
    double se = 0.0;
    if (n_samples > 1) {
        const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
        se = std::sqrt(var / nn);
    }
    return {mean, se};
}

enum class Otoc8Mode { exact, sampled };

/// Eight-point OTOC (1/d) <tr(W P W P)>_P with W = P1 P2(U) P1 P2(U). The
/// exact mode uses the twirl identity otoc8 = otoc4^2; the sampled mode
/// averages over `k` uniform full-register Paulis.
inline Estimate otoc8(const DenseUnitary& u, const Pauli& p1, const Pauli& p2, Otoc8Mode mode, std::size_t k = 0,
                      Rng* rng = nullptr) {
    if (p1.is_identity() || p2.is_identity()) {
        throw std::invalid_argument("otoc8: Pauli arguments must be non-identity");
    }
    if (mode == Otoc8Mode::exact) {
        const double o = otoc4(u, p1, p2);
        return {o * o, 0.0};
    }
    if (k == 0 || rng == nullptr) {
        throw std::invalid_argument("otoc8: sampled mode needs k >= 1 and an RNG");
    }
    const Matrix half = detail::pauli_times(p1, detail::heisenberg(u, p2));
    const Matrix w = half * half;
    const std::size_t d = u.dim();
    const Region all = Region::range(0, u.num_qubits());
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
        const PauliAction act(random_pauli(u.num_qubits(), all, *rng));
        // tr(W P W P) = sum_{i,j} W[i,j] phase(j^x) W[j^x, i^x] phase(i)
        cplx tr = 0.0;
        for (std::uint64_t i = 0; i < d; ++i) {
            const cplx* wi = w.row(i).data();
            const cplx phi = act.phase(i);
            const std::uint64_t ix = act.target(i);
            cplx acc = 0.0;
            for (std::uint64_t j = 0; j < d; ++j) {
                const std::uint64_t jx = act.target(j);
                acc += wi[j] * act.phase(jx) * w(jx, ix);
            }
            tr += acc * phi;
        }
        const double v = tr.real() / static_cast<double>(d);
        sum += v;
        sum_sq += v * v;
    }
    const double nn = static_cast<double>(k);
    const double mean = sum / nn;
    double se = 0.0;
    if (k > 1) {
        se = std::sqrt(std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) / nn);
    }
    return {mean, se};
}

/// -log2(d_A^2 Omega), the bound on I(R|C) in bits.
inline double mutual_info_bound(double omega, std::size_t n_a) {
    if (!(omega > 0.0)) {
        throw std::invalid_argument("mutual_info_bound: omega must be positive");
    }
    return -(2.0 * static_cast<double>(n_a) + std::log2(omega));
}

/// Omega(U) minus the perfect-scrambler plateau: the non-identity OTOC average f(U).
inline double scrambling_residual(double omega, const Partition& part) { return omega - part.scrambling_plateau(); }

inline bool is_scrambling(const DenseUnitary& u, const Partition& part, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("is_scrambling: tol must be positive");
    }
    return std::abs(omega_exact(u, part) - part.scrambling_plateau()) <= tol;
}

struct FluctuationEstimate {
    std::size_t t = 0;
    std::size_t ensemble_size = 0;
    double mean = 0.0;
    double variance = 0.0;
    double mean_stderr = 0.0;
    double variance_stderr = 0.0;
};

/// Sample mean and unbiased variance of omega_exact over `ensemble_size`
/// circuits drawn from the t-doped ensemble. Sample k uses the stream
/// derive_seed(seed, t, k), so the result does not depend on `jobs`.
inline FluctuationEstimate delta_omega_estimate(std::size_t t, const Partition& part, std::size_t ensemble_size,
                                                std::uint64_t seed, std::size_t gates_per_layer = 0,
                                                std::size_t jobs = 1) {
    if (ensemble_size < 2) {
        throw std::invalid_argument("delta_omega_estimate: ensemble_size must be at least 2");
    }
    if (gates_per_layer == 0) {
        gates_per_layer = default_gates_per_layer(part.n);
    }
    std::vector<double> omegas(ensemble_size);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t k = first; k < ensemble_size; k += stride) {
            Rng rng(derive_seed(seed, t, k));
            const Circuit c = sample_doped_circuit(part.n, t, gates_per_layer, rng);
            omegas[k] = omega_exact(synthesize_dense(c), part);
        }
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, ensemble_size));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back(work, j, jobs);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    const double nn = static_cast<double>(ensemble_size);
    double mean = 0.0;
    for (double w : omegas) {
        mean += w;
    }
    mean /= nn;
    double m2 = 0.0, m4 = 0.0;
    for (double w : omegas) {
        const double dv = w - mean;
        m2 += dv * dv;
        m4 += dv * dv * dv * dv;
    }
    FluctuationEstimate out;
    out.t = t;
    out.ensemble_size = ensemble_size;
    out.mean = mean;
    out.variance = m2 / (nn - 1.0);
    out.mean_stderr = std::sqrt(out.variance / nn);
    const double mu4 = m4 / nn, mu2 = m2 / nn;
    out.variance_stderr = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / nn);
    return out;
}

}  // namespace hpdecode
