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

// Block-Gram contraction for Pauli-sandwich traces.
//
// Write row indices of an n-qubit operator as (c, delta) with c in C and delta
// in D, and column indices as (a, b) with a in A and b in B. Then
//
//   Theta[(c,a),(c',a')] = sum_{delta,b} conj(U[(c,delta),(a,b)]) V[(c',delta),(a',b)]
//
// is a (d_C d_A)-square matrix costing d_C d_A d^2 operations, and every
// trace tr(U^dagger P_C V P_A) is a d_C d_A-term sum over Theta:
//
//   tr(U^dagger P_C V P_A) = sum_{c',a} phi_C(c') phi_A(a) Theta[(c' ^ x_C, a),(c', a ^ x_A)]
//
// where P|i> = phi(i) |i ^ x>. The same matrix gives tr_B(U^dagger P_C V).

#pragma once

#include <algorithm>
#include <complex>
#include <cstring>
#include <numbers>
#include <vector>

#include "hpdecode/gate.hpp"
#include "hpdecode/linalg.hpp"
#include "hpdecode/partition.hpp"
#include "hpdecode/pauli.hpp"

namespace hpdecode {

/// Row-major complex matrix with separate real and imaginary planes.
struct PlanarMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> re;
    std::vector<double> im;

    PlanarMatrix() = default;
    PlanarMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), re(r * c, 0.0), im(r * c, 0.0) {}

    static PlanarMatrix from(const Matrix& m) {
        PlanarMatrix p(m.rows(), m.cols());
        for (std::size_t k = 0; k < m.rows() * m.cols(); ++k) {
            p.re[k] = m.data()[k].real();
            p.im[k] = m.data()[k].imag();
        }
        return p;
    }

    Matrix to_matrix() const {
        Matrix m(rows, cols);
        for (std::size_t k = 0; k < rows * cols; ++k) {
            m.data()[k] = {re[k], im[k]};
        }
        return m;
    }

    double* row_re(std::size_t r) { return re.data() + r * cols; }
    double* row_im(std::size_t r) { return im.data() + r * cols; }
    const double* row_re(std::size_t r) const { return re.data() + r * cols; }
    const double* row_im(std::size_t r) const { return im.data() + r * cols; }
};

namespace detail {

#if defined(__GNUC__) || defined(__clang__)
typedef double v4d __attribute__((vector_size(32)));

inline v4d load4(const double* p) {
    v4d v;
    std::memcpy(&v, p, sizeof(v));
    return v;
}
#endif

/// sum_k conj(u_k) v_k over planar spans; fixed summation order.
inline cplx conj_dot(const double* ur, const double* ui, const double* vr, const double* vi, std::size_t len) {
    std::size_t k = 0;
    double sr = 0.0, si = 0.0;
#if defined(__GNUC__) || defined(__clang__)
    if (len >= 8) {
        v4d ar0{}, ai0{}, ar1{}, ai1{};
        for (; k + 8 <= len; k += 8) {
            const v4d a = load4(ur + k), b = load4(ui + k), c = load4(vr + k), d = load4(vi + k);
            const v4d e = load4(ur + k + 4), f = load4(ui + k + 4), g = load4(vr + k + 4), h = load4(vi + k + 4);
            ar0 += a * c + b * d;
            ai0 += a * d - b * c;
            ar1 += e * g + f * h;
            ai1 += e * h - f * g;
        }
        const v4d ar = ar0 + ar1, ai = ai0 + ai1;
        sr = (ar[0] + ar[1]) + (ar[2] + ar[3]);
        si = (ai[0] + ai[1]) + (ai[2] + ai[3]);
    }
#endif
    for (; k < len; ++k) {
        sr += ur[k] * vr[k] + ui[k] * vi[k];
        si += ur[k] * vi[k] - ui[k] * vr[k];
    }
    return {sr, si};
}

/// Row r of (g V), written to (out_re, out_im). The arithmetic matches
/// apply_gate_planar exactly, so a row computed here is bit-identical to the
/// row after an in-place update.
inline void gate_row(const Gate& g, std::size_t n, const PlanarMatrix& v, std::size_t r, double* out_re, double* out_im) {
    const std::size_t len = v.cols;
    switch (g.kind) {
        case GateKind::H: {
            const std::uint64_t bit = qubit_bit(n, g.q0);
            const double s = 1.0 / std::numbers::sqrt2;
            const double *xr = v.row_re(r & ~bit), *xi = v.row_im(r & ~bit);
            const double *yr = v.row_re(r | bit), *yi = v.row_im(r | bit);
            if (r & bit) {
                for (std::size_t k = 0; k < len; ++k) {
                    out_re[k] = (xr[k] - yr[k]) * s;
                    out_im[k] = (xi[k] - yi[k]) * s;
                }
            } else {
                for (std::size_t k = 0; k < len; ++k) {
                    out_re[k] = (xr[k] + yr[k]) * s;
                    out_im[k] = (xi[k] + yi[k]) * s;
                }
            }
            return;
        }
        case GateKind::P: {
            const double *xr = v.row_re(r), *xi = v.row_im(r);
            if (r & qubit_bit(n, g.q0)) {
                for (std::size_t k = 0; k < len; ++k) {
                    out_re[k] = -xi[k];
                    out_im[k] = xr[k];
                }
            } else {
                std::memcpy(out_re, xr, len * sizeof(double));
                std::memcpy(out_im, xi, len * sizeof(double));
            }
            return;
        }
        case GateKind::T: {
            const double s = 1.0 / std::numbers::sqrt2;
            const double *xr = v.row_re(r), *xi = v.row_im(r);
            if (r & qubit_bit(n, g.q0)) {
                for (std::size_t k = 0; k < len; ++k) {
                    out_re[k] = (xr[k] - xi[k]) * s;
                    out_im[k] = (xr[k] + xi[k]) * s;
                }
            } else {
                std::memcpy(out_re, xr, len * sizeof(double));
                std::memcpy(out_im, xi, len * sizeof(double));
            }
            return;
        }
        case GateKind::CNOT: {
            const std::uint64_t src = (r & qubit_bit(n, g.q0)) ? (r ^ qubit_bit(n, g.q1)) : r;
            std::memcpy(out_re, v.row_re(src), len * sizeof(double));
            std::memcpy(out_im, v.row_im(src), len * sizeof(double));
            return;
        }
    }
}

/// V <- g V in place, same arithmetic as gate_row.
inline void apply_gate_planar(const Gate& g, std::size_t n, PlanarMatrix& v) {
    g.validate(n);
    const std::size_t len = v.cols;
    const std::uint64_t full = v.rows - 1;
    switch (g.kind) {
        case GateKind::H: {
            const std::uint64_t bit = qubit_bit(n, g.q0);
            const double s = 1.0 / std::numbers::sqrt2;
            for_each_outside(full, bit, [&](std::uint64_t r0) {
                double *xr = v.row_re(r0), *xi = v.row_im(r0);
                double *yr = v.row_re(r0 | bit), *yi = v.row_im(r0 | bit);
                for (std::size_t k = 0; k < len; ++k) {
                    const double a = xr[k], b = xi[k], c = yr[k], d = yi[k];
                    xr[k] = (a + c) * s;
                    xi[k] = (b + d) * s;
                    yr[k] = (a - c) * s;
                    yi[k] = (b - d) * s;
                }
            });
            return;
        }
        case GateKind::P: {
            const std::uint64_t bit = qubit_bit(n, g.q0);
            for_each_outside(full, bit, [&](std::uint64_t r0) {
                double *xr = v.row_re(r0 | bit), *xi = v.row_im(r0 | bit);
                for (std::size_t k = 0; k < len; ++k) {
                    const double a = xr[k], b = xi[k];
                    xr[k] = -b;
                    xi[k] = a;
                }
            });
            return;
        }
        case GateKind::T: {
            const std::uint64_t bit = qubit_bit(n, g.q0);
            const double s = 1.0 / std::numbers::sqrt2;
            for_each_outside(full, bit, [&](std::uint64_t r0) {
                double *xr = v.row_re(r0 | bit), *xi = v.row_im(r0 | bit);
                for (std::size_t k = 0; k < len; ++k) {
                    const double a = xr[k], b = xi[k];
                    xr[k] = (a - b) * s;
                    xi[k] = (a + b) * s;
                }
            });
            return;
        }
        case GateKind::CNOT: {
            const std::uint64_t cb = qubit_bit(n, g.q0), tb = qubit_bit(n, g.q1);
            for_each_outside(full, cb | tb, [&](std::uint64_t r0) {
                std::swap_ranges(v.row_re(r0 | cb), v.row_re(r0 | cb) + len, v.row_re(r0 | cb | tb));
                std::swap_ranges(v.row_im(r0 | cb), v.row_im(r0 | cb) + len, v.row_im(r0 | cb | tb));
            });
            return;
        }
    }
}

}  // namespace detail

/// Phase tables of every Pauli on a k-qubit local register, in enumerate_region order.
struct LocalPaulis {
    std::size_t k = 0;
    std::vector<std::uint64_t> x;              // x mask per Pauli
    std::vector<std::vector<cplx>> phase;      // phase[p][i]: P|i> = phase * |i ^ x>

    explicit LocalPaulis(std::size_t k_) : k(k_) {
        const auto ps = enumerate_region(k, Region::range(0, k));
        const std::size_t dim = std::size_t{1} << k;
        for (const auto& p : ps) {
            PauliAction act(p);
            x.push_back(act.x_mask());
            std::vector<cplx> ph(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                ph[i] = act.phase(i);
            }
            phase.push_back(std::move(ph));
        }
    }

    std::size_t count() const { return x.size(); }
};

/// Theta(U, V) as defined at the top of this file, for a fixed U and a mutable V.
class BlockGram {
  public:
    BlockGram(const DenseUnitary& u, const Partition& part)
        : part_(part), u_(PlanarMatrix::from(u.matrix())), v_(u_.rows, u_.cols) {
        part_.validate();
        if (u.num_qubits() != part.n) {
            throw std::invalid_argument("BlockGram: U does not match the partition");
        }
        scratch_ = PlanarMatrix(part_.d_c(), u_.cols);
        set_v_identity();
    }

    const Partition& partition() const { return part_; }
    std::size_t k() const { return part_.d_c() * part_.d_a(); }

    void set_v_identity() {
        std::fill(v_.re.begin(), v_.re.end(), 0.0);
        std::fill(v_.im.begin(), v_.im.end(), 0.0);
        for (std::size_t i = 0; i < v_.rows; ++i) {
            v_.re[i * v_.cols + i] = 1.0;
        }
    }

    void set_v(const DenseUnitary& v) {
        if (v.num_qubits() != part_.n) {
            throw std::invalid_argument("BlockGram::set_v: qubit count differs");
        }
        v_ = PlanarMatrix::from(v.matrix());
    }

    /// V <- g V.
    void apply_to_v(const Gate& g) { detail::apply_gate_planar(g, part_.n, v_); }

    Matrix v_matrix() const { return v_.to_matrix(); }

    /// Theta(U, V), or Theta(U, g V) when `g` is given (V itself is untouched).
    void compute(Matrix& theta, const Gate* g = nullptr) {
        if (g) {
            g->validate(part_.n);
        }
        const std::size_t dc = part_.d_c(), da = part_.d_a(), db = part_.d_b(), dd = part_.d_d();
        const std::size_t kk = dc * da;
        if (theta.rows() != kk || theta.cols() != kk) {
            theta = Matrix(kk, kk);
        } else {
            std::fill(theta.data(), theta.data() + kk * kk, cplx{0.0, 0.0});
        }
        std::vector<const double*> vre(dc), vim(dc);
        for (std::size_t delta = 0; delta < dd; ++delta) {
            for (std::size_t c = 0; c < dc; ++c) {
                const std::size_t r = c * dd + delta;
                if (g) {
                    detail::gate_row(*g, part_.n, v_, r, scratch_.row_re(c), scratch_.row_im(c));
                    vre[c] = scratch_.row_re(c);
                    vim[c] = scratch_.row_im(c);
                } else {
                    vre[c] = v_.row_re(r);
                    vim[c] = v_.row_im(r);
                }
            }
            for (std::size_t c = 0; c < dc; ++c) {
                const double* ur = u_.row_re(c * dd + delta);
                const double* ui = u_.row_im(c * dd + delta);
                for (std::size_t a = 0; a < da; ++a) {
                    cplx* out = theta.row(c * da + a).data();
                    for (std::size_t c2 = 0; c2 < dc; ++c2) {
                        for (std::size_t a2 = 0; a2 < da; ++a2) {
                            out[c2 * da + a2] += detail::conj_dot(ur + a * db, ui + a * db, vre[c2] + a2 * db,
                                                                  vim[c2] + a2 * db, db);
                        }
                    }
                }
            }
        }
    }

  private:
    Partition part_;
    PlanarMatrix u_;
    PlanarMatrix v_;
    PlanarMatrix scratch_;
};

/// Theta(U, V) in one call.
inline Matrix block_gram(const DenseUnitary& u, const DenseUnitary& v, const Partition& part) {
    BlockGram bg(u, part);
    bg.set_v(v);
    Matrix theta;
    bg.compute(theta);
    return theta;
}

/// Reads Pauli-sandwich traces off Theta for a fixed partition.
class SandwichTraces {
  public:
    explicit SandwichTraces(const Partition& part) : part_(part), pc_(part.n_c), pa_(part.n_a) {}

    std::size_t num_c() const { return pc_.count(); }
    std::size_t num_a() const { return pa_.count(); }

    /// tr(U^dagger P_C V P_A) for the ic-th Pauli on C and the ia-th on A.
    cplx trace(const Matrix& theta, std::size_t ic, std::size_t ia) const {
        const std::size_t dc = part_.d_c(), da = part_.d_a();
        const std::uint64_t xc = pc_.x[ic], xa = pa_.x[ia];
        const auto& phc = pc_.phase[ic];
        const auto& pha = pa_.phase[ia];
        cplx total = 0.0;
        for (std::size_t c2 = 0; c2 < dc; ++c2) {
            cplx inner = 0.0;
            for (std::size_t a = 0; a < da; ++a) {
                inner += pha[a] * theta((c2 ^ xc) * da + a, c2 * da + (a ^ xa));
            }
            total += phc[c2] * inner;
        }
        return total;
    }

    /// All traces, C index major: out[ic * num_a() + ia].
    std::vector<cplx> all(const Matrix& theta) const {
        std::vector<cplx> out(num_c() * num_a());
        for (std::size_t ic = 0; ic < num_c(); ++ic) {
            for (std::size_t ia = 0; ia < num_a(); ++ia) {
                out[ic * num_a() + ia] = trace(theta, ic, ia);
            }
        }
        return out;
    }

    /// tr_B(U^dagger P_C V) as a d_A x d_A matrix.
    Matrix reduced_on_a(const Matrix& theta, std::size_t ic) const {
        const std::size_t dc = part_.d_c(), da = part_.d_a();
        const std::uint64_t xc = pc_.x[ic];
        Matrix y(da, da);
        for (std::size_t c2 = 0; c2 < dc; ++c2) {
            const cplx ph = pc_.phase[ic][c2];
            for (std::size_t a = 0; a < da; ++a) {
                for (std::size_t a2 = 0; a2 < da; ++a2) {
                    y(a, a2) += ph * theta((c2 ^ xc) * da + a, c2 * da + a2);
                }
            }
        }
        return y;
    }

  private:
    Partition part_;
    LocalPaulis pc_;
    LocalPaulis pa_;
};

}  // namespace hpdecode
