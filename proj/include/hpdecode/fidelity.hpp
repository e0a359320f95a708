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
#include <string>
#include <vector>

#include "hpdecode/linalg.hpp"
#include "hpdecode/partition.hpp"
#include "hpdecode/pauli.hpp"
#include "hpdecode/scrambling.hpp"
#include "hpdecode/trace_kernel.hpp"

namespace hpdecode {

/// Thrown when sum_{P_C} |tr(U^dagger P_C V)|^2 underflows.
class DegenerateCostError : public std::runtime_error {
  public:
    explicit DegenerateCostError(double numerator)
        : std::runtime_error("cost: degenerate numerator " + std::to_string(numerator) + " (below 1e-14)"),
          numerator_(numerator) {}
    double numerator() const { return numerator_; }

  private:
    double numerator_;
};

/// N = sum_{P_C} |tr(U^dagger P_C V)|^2, M = sum_{P_C, P_A != 1} |tr(U^dagger P_C V P_A)|^2,
/// c = M / N and F = 1 / (1 + c).
struct CostBreakdown {
    double numerator = 0.0;
    double mixed = 0.0;
    double cost = 0.0;
    double fidelity = 0.0;

    static CostBreakdown from_sums(double numerator, double mixed) {
        if (!(numerator >= 1e-14)) {
            throw DegenerateCostError(numerator);
        }
        CostBreakdown b;
        b.numerator = numerator;
        b.mixed = mixed;
        b.cost = mixed / numerator;
        b.fidelity = 1.0 / (1.0 + b.cost);
        return b;
    }
};

/// Cost by direct enumeration: 4^{n_C} (4^{n_A}) Pauli-sandwich traces, each O(d^2).
inline CostBreakdown cost(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    if (u.num_qubits() != part.n || v.num_qubits() != part.n) {
        throw std::invalid_argument("cost: U and V must match the partition");
    }
    const auto pcs = enumerate_region(part.n, part.c());
    const auto pas = enumerate_region(part.n, part.a());
    double numerator = 0.0, mixed = 0.0;
    for (const auto& pc : pcs) {
        for (std::size_t ia = 0; ia < pas.size(); ++ia) {
            const double w = std::norm(pauli_sandwich_trace(u, v, pc, pas[ia]));
            if (ia == 0) {
                numerator += w;
            } else {
                mixed += w;
            }
        }
    }
    return CostBreakdown::from_sums(numerator, mixed);
}

/// Cost read off a block-Gram matrix; identical in value to cost().
inline CostBreakdown cost_from_gram(const Matrix& theta, const SandwichTraces& traces) {
    double numerator = 0.0, mixed = 0.0;
    for (std::size_t ic = 0; ic < traces.num_c(); ++ic) {
        numerator += std::norm(traces.trace(theta, ic, 0));
        for (std::size_t ia = 1; ia < traces.num_a(); ++ia) {
            mixed += std::norm(traces.trace(theta, ic, ia));
        }
    }
    return CostBreakdown::from_sums(numerator, mixed);
}

inline CostBreakdown fast_cost(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    return cost_from_gram(block_gram(u, v, part), SandwichTraces(part));
}

inline double fidelity(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    return cost(u, v, part).fidelity;
}

/// Breakdown for (U, gV). The incoming breakdown is not needed for the
/// contraction route and is only checked for consistency of shape.
inline CostBreakdown cost_after_gate(const DenseUnitary& u, const DenseUnitary& v, const CostBreakdown& current,
                                     const Gate& g, const Partition& part) {
    if (!(current.numerator >= 0.0)) {
        throw std::invalid_argument("cost_after_gate: malformed breakdown");
    }
    BlockGram bg(u, part);
    bg.set_v(v);
    Matrix theta;
    bg.compute(theta, &g);
    return cost_from_gram(theta, SandwichTraces(part));
}

/// 1 / (d_A^2 Omega(U)), the recovery fidelity of the decoder V = U.
inline double ideal_fidelity(const DenseUnitary& u, const Partition& part) {
    const double da = static_cast<double>(part.d_a());
    return 1.0 / (da * da * omega_exact(u, part));
}

/// d^-1 |tr(U^dagger V)|^2.
inline double learnability_overlap(const DenseUnitary& u, const DenseUnitary& v) {
    if (u.num_qubits() != v.num_qubits()) {
        throw std::invalid_argument("learnability_overlap: qubit counts differ");
    }
    cplx tr = 0.0;
    for (std::size_t r = 0; r < u.dim(); ++r) {
        const cplx* ur = u.matrix().row(r).data();
        const cplx* vr = v.matrix().row(r).data();
        for (std::size_t c = 0; c < u.dim(); ++c) {
            tr += std::conj(ur[c]) * vr[c];
        }
    }
    return std::norm(tr) / static_cast<double>(u.dim());
}

/// Teleportation fidelity of |psi> on A:
///   <|<psi| Y |psi>|^2>_{P_C} / <<psi| Y Y^dagger |psi>>_{P_C},  Y = tr_B(U^dagger P_C V),
/// using tr_B(V^dagger P_C U) = Y^dagger. The denominator is the post-selection
/// probability of the teleportation circuit, sum_{P_C} |Y^dagger psi|^2.
inline double teleport_fidelity(const DenseUnitary& u, const DenseUnitary& v, const StateVector& psi,
                                const Partition& part) {
    if (u.num_qubits() != part.n || v.num_qubits() != part.n) {
        throw std::invalid_argument("teleport_fidelity: U and V must match the partition");
    }
    if (psi.num_qubits() != part.n_a) {
        throw std::invalid_argument("teleport_fidelity: psi must live on A");
    }
    if (std::abs(psi.norm_sq() - 1.0) > 1e-10) {
        throw std::invalid_argument("teleport_fidelity: psi is not normalized");
    }
    const std::size_t da = part.d_a();
    double num = 0.0, den = 0.0;
    for (const auto& pc : enumerate_region(part.n, part.c())) {
        const Matrix pv = detail::pauli_times(pc, v.matrix());
        const Matrix y = partial_trace_adjoint_product(u.matrix(), pv, part.n, part.a());
        cplx expect = 0.0;
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < da; ++i) {
            cplx yi = 0.0, ydi = 0.0;
            for (std::size_t j = 0; j < da; ++j) {
                yi += y(i, j) * psi[j];
                ydi += std::conj(y(j, i)) * psi[j];
            }
            expect += std::conj(psi[i]) * yi;
            norm_sq += std::norm(ydi);
        }
        num += std::norm(expect);
        den += norm_sq;
    }
    if (den < 1e-14) {
        throw DegenerateCostError(den);
    }
    return num / den;
}

}  // namespace hpdecode
