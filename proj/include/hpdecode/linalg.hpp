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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpdecode/gate.hpp"
#include "hpdecode/pauli.hpp"
#include "hpdecode/rng.hpp"

namespace hpdecode {

/// Dimension caps guarding against accidental exponential allocations.
struct Limits {
    std::size_t matrix_qubits = 12;
    std::size_t state_qubits = 24;
};

inline Limits& limits() {
    static Limits instance;
    return instance;
}

inline void check_matrix_qubits(std::size_t n, const char* where) {
    if (n > limits().matrix_qubits) {
        throw std::length_error(std::string(where) + ": " + std::to_string(n) + " qubits exceeds the dense-matrix cap of " +
                                std::to_string(limits().matrix_qubits));
    }
}

inline void check_state_qubits(std::size_t m, const char* where) {
    if (m > limits().state_qubits) {
        throw std::length_error(std::string(where) + ": " + std::to_string(m) + " qubits exceeds the state-vector cap of " +
                                std::to_string(limits().state_qubits));
    }
}

/// Thrown when an EPR post-selection has (numerically) zero probability.
class ProjectionError : public std::runtime_error {
  public:
    ProjectionError(const std::string& what, double probability) : std::runtime_error(what), probability_(probability) {}
    double probability() const { return probability_; }

  private:
    double probability_;
};

/// Row-major dense complex matrix.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t dim) {
        Matrix m(dim, dim);
        for (std::size_t k = 0; k < dim; ++k) {
            m(k, k) = 1.0;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    Matrix conjugate() const {
        Matrix out = *this;
        for (auto& v : out.data_) {
            v = std::conj(v);
        }
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t k = 0; k < std::min(rows_, cols_); ++k) {
            t += (*this)(k, k);
        }
        return t;
    }

    Matrix& operator*=(cplx s) {
        for (auto& v : data_) {
            v *= s;
        }
        return *this;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("Matrix product: inner dimensions differ");
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            cplx* orow = out.data_.data() + i * out.cols_;
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{0.0, 0.0}) {
                    continue;
                }
                const cplx* brow = b.data_.data() + k * b.cols_;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    orow[j] += aik * brow[j];
                }
            }
        }
        return out;
    }

    /// Largest entrywise modulus of (a - b).
    friend double max_abs_diff(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.data_.size(); ++k) {
            worst = std::max(worst, std::abs(a.data_[k] - b.data_[k]));
        }
        return worst;
    }

    double frobenius_norm_sq() const {
        double s = 0.0;
        for (const auto& v : data_) {
            s += std::norm(v);
        }
        return s;
    }

  private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("Matrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Dimension of an n-qubit space, rejecting absurd sizes.
inline std::size_t qubit_dim(std::size_t n) {
    if (n >= 40) {
        throw std::length_error("qubit_dim: register too large");
    }
    return std::size_t{1} << n;
}

inline std::size_t log2_dim(std::size_t dim, const char* where) {
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument(std::string(where) + ": dimension is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

/// 2^n x 2^n unitary on n qubits.
class DenseUnitary {
  public:
    DenseUnitary() = default;

    static DenseUnitary identity(std::size_t n) {
        check_matrix_qubits(n, "DenseUnitary::identity");
        return DenseUnitary(n, Matrix::identity(qubit_dim(n)));
    }

    /// Wraps a square matrix after checking U^dagger U == I to `tol`.
    static DenseUnitary from_matrix(Matrix m, double tol = 1e-10) {
        if (!m.square()) {
            throw std::invalid_argument("DenseUnitary: matrix is not square");
        }
        const std::size_t n = log2_dim(m.rows(), "DenseUnitary");
        check_matrix_qubits(n, "DenseUnitary");
        DenseUnitary u(n, std::move(m));
        u.check_unitary(tol);
        return u;
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    DenseUnitary adjoint() const { return DenseUnitary(n_, m_.adjoint()); }
    DenseUnitary conjugate() const { return DenseUnitary(n_, m_.conjugate()); }

    /// e^{i phi} U.
    DenseUnitary with_global_phase(double phi) const { return DenseUnitary(n_, m_ * std::polar(1.0, phi)); }

    friend DenseUnitary operator*(const DenseUnitary& a, const DenseUnitary& b) {
        if (a.n_ != b.n_) {
            throw std::invalid_argument("DenseUnitary product: qubit counts differ");
        }
        return DenseUnitary(a.n_, a.m_ * b.m_);
    }

    /// Column norms always; the full U^dagger U check for n <= 8 where it is cheap.
    void check_unitary(double tol) const {
        const std::size_t d = dim();
        for (std::size_t c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
                s += std::norm(m_(r, c));
            }
            if (std::abs(s - 1.0) > tol) {
                throw std::runtime_error("DenseUnitary: column " + std::to_string(c) + " is not normalized");
            }
        }
        if (n_ <= 8) {
            const double err = max_abs_diff(m_.adjoint() * m_, Matrix::identity(d));
            if (err > tol) {
                throw std::runtime_error("DenseUnitary: U^dagger U deviates from identity by " + std::to_string(err));
            }
        }
    }

  private:
    DenseUnitary(std::size_t n, Matrix m) : n_(n), m_(std::move(m)) {}

    std::size_t n_ = 0;
    Matrix m_;

    friend void apply_gate(const Gate& g, DenseUnitary& u);
};

/// Pure state on m qubits.
class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on m qubits.
    explicit StateVector(std::size_t m) : m_(m) {
        check_state_qubits(m, "StateVector");
        amps_.assign(qubit_dim(m), 0.0);
        amps_[0] = 1.0;
    }

    static StateVector from_amplitudes(std::vector<cplx> amps) {
        const std::size_t m = log2_dim(amps.size(), "StateVector");
        check_state_qubits(m, "StateVector");
        StateVector s;
        s.m_ = m;
        s.amps_ = std::move(amps);
        return s;
    }

    static StateVector basis(std::size_t m, std::uint64_t index) {
        StateVector s(m);
        if (index >= s.amps_.size()) {
            throw std::out_of_range("StateVector::basis: index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    std::size_t num_qubits() const { return m_; }
    std::size_t dim() const { return amps_.size(); }
    cplx& operator[](std::size_t k) { return amps_[k]; }
    const cplx& operator[](std::size_t k) const { return amps_[k]; }
    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    void normalize() {
        const double n2 = norm_sq();
        if (n2 <= 0.0) {
            throw std::runtime_error("StateVector::normalize: zero vector");
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : amps_) {
            a *= inv;
        }
    }

    cplx inner(const StateVector& other) const {
        if (other.m_ != m_) {
            throw std::invalid_argument("StateVector::inner: qubit counts differ");
        }
        cplx s = 0.0;
        for (std::size_t k = 0; k < amps_.size(); ++k) {
            s += std::conj(amps_[k]) * other.amps_[k];
        }
        return s;
    }

  private:
    std::size_t m_ = 0;
    std::vector<cplx> amps_;
};

// ---------------------------------------------------------------------------
// Index helpers.

/// Bit positions (inside an m-qubit index) of the qubits of `r`, in region order.
inline std::vector<std::uint64_t> region_bits(std::size_t m, const Region& r) {
    r.validate(m);
    std::vector<std::uint64_t> bits;
    bits.reserve(r.size());
    for (auto q : r) {
        bits.push_back(qubit_bit(m, q));
    }
    return bits;
}

/// Scatters the k-bit value `v` (region qubit 0 = MSB of v) onto the bits of the region.
inline std::uint64_t scatter_bits(std::uint64_t v, const std::vector<std::uint64_t>& bits) {
    std::uint64_t out = 0;
    const std::size_t k = bits.size();
    for (std::size_t j = 0; j < k; ++j) {
        if ((v >> (k - 1 - j)) & 1u) {
            out |= bits[j];
        }
    }
    return out;
}

/// Table of scatter_bits(v) for every v in [0, 2^|r|).
inline std::vector<std::uint64_t> scatter_table(std::size_t m, const Region& r) {
    const auto bits = region_bits(m, r);
    std::vector<std::uint64_t> table(std::size_t{1} << bits.size());
    for (std::uint64_t v = 0; v < table.size(); ++v) {
        table[v] = scatter_bits(v, bits);
    }
    return table;
}

/// Calls f(base) for every index whose bits inside `mask` are all zero, ascending.
template <typename F>
void for_each_outside(std::uint64_t full_mask, std::uint64_t mask, F&& f) {
    const std::uint64_t free = full_mask & ~mask;
    std::uint64_t sub = 0;
    while (true) {
        f(sub);
        if (sub == free) {
            break;
        }
        sub = (sub - free) & free;
    }
}

// ---------------------------------------------------------------------------
// Construction and products.

inline Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    const std::size_t limit = qubit_dim(limits().matrix_qubits);
    if (rows > limit || cols > limit) {
        throw std::length_error("kron: result exceeds the dense-matrix cap");
    }
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

/// Dense matrix of a Pauli (including its phase).
inline Matrix pauli_matrix(const Pauli& p) {
    check_matrix_qubits(p.num_qubits(), "pauli_matrix");
    const std::size_t d = qubit_dim(p.num_qubits());
    PauliAction act(p);
    Matrix m(d, d);
    for (std::uint64_t i = 0; i < d; ++i) {
        m(act.target(i), i) = act.phase(i);
    }
    return m;
}

/// Dense 2^n x 2^n matrix of one gate on an n-qubit register (test and oracle use).
inline Matrix gate_matrix(const Gate& g, std::size_t n) {
    g.validate(n);
    check_matrix_qubits(n, "gate_matrix");
    const std::size_t d = qubit_dim(n);
    Matrix m(d, d);
    if (g.kind == GateKind::CNOT) {
        const std::uint64_t cb = qubit_bit(n, g.q0), tb = qubit_bit(n, g.q1);
        for (std::uint64_t i = 0; i < d; ++i) {
            m((i & cb) ? (i ^ tb) : i, i) = 1.0;
        }
        return m;
    }
    const auto u = single_qubit_matrix(g.kind);
    const std::uint64_t bit = qubit_bit(n, g.q0);
    for (std::uint64_t i = 0; i < d; ++i) {
        const unsigned in = (i & bit) ? 1 : 0;
        const std::uint64_t i0 = i & ~bit;
        m(i0, i) = u[0 * 2 + in];
        m(i0 | bit, i) = u[1 * 2 + in];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Gate application (left multiplication).

namespace detail {

/// Applies a gate to `rows` groups of `width` contiguous entries indexed by an n-qubit basis index.
inline void apply_gate_rows(const Gate& g, std::size_t n, cplx* data, std::size_t width) {
    g.validate(n);
    const std::size_t d = qubit_dim(n);
    const std::uint64_t full = d - 1;
    if (g.kind == GateKind::CNOT) {
        const std::uint64_t cb = qubit_bit(n, g.q0), tb = qubit_bit(n, g.q1);
        for_each_outside(full, cb | tb, [&](std::uint64_t base) {
            cplx* a = data + (base | cb) * width;
            cplx* b = data + (base | cb | tb) * width;
            for (std::size_t k = 0; k < width; ++k) {
                std::swap(a[k], b[k]);
            }
        });
        return;
    }
    const std::uint64_t bit = qubit_bit(n, g.q0);
    if (g.kind == GateKind::P || g.kind == GateKind::T) {
        const cplx ph = single_qubit_matrix(g.kind)[3];
        for_each_outside(full, bit, [&](std::uint64_t base) {
            cplx* b = data + (base | bit) * width;
            for (std::size_t k = 0; k < width; ++k) {
                b[k] *= ph;
            }
        });
        return;
    }
    const double s = 1.0 / std::numbers::sqrt2;
    for_each_outside(full, bit, [&](std::uint64_t base) {
        cplx* a = data + base * width;
        cplx* b = data + (base | bit) * width;
        for (std::size_t k = 0; k < width; ++k) {
            const cplx x = a[k], y = b[k];
            a[k] = (x + y) * s;
            b[k] = (x - y) * s;
        }
    });
}

}  // namespace detail

/// U <- g U.
inline void apply_gate(const Gate& g, DenseUnitary& u) {
    detail::apply_gate_rows(g, u.n_, u.m_.data(), u.dim());
}

/// |s> <- g |s>.
inline void apply_gate(const Gate& g, StateVector& s) {
    detail::apply_gate_rows(g, s.num_qubits(), s.amplitudes().data(), 1);
}

/// Applies an operator on len(qubits) qubits to the listed qubits of `s`;
/// qubits[k] receives the operator's qubit k.
inline void apply_matrix(const Matrix& op, const std::vector<std::size_t>& qubits, StateVector& s) {
    const std::size_t k = qubits.size();
    if (op.rows() != qubit_dim(k) || op.cols() != qubit_dim(k)) {
        throw std::invalid_argument("apply_matrix: operator size does not match qubit list");
    }
    const Region r(qubits);
    const auto table = scatter_table(s.num_qubits(), r);
    const std::uint64_t mask = r.mask(s.num_qubits());
    const std::size_t dk = table.size();
    std::vector<cplx> in(dk), out(dk);
    auto amps = s.amplitudes();
    for_each_outside(s.dim() - 1, mask, [&](std::uint64_t base) {
        for (std::size_t j = 0; j < dk; ++j) {
            in[j] = amps[base | table[j]];
        }
        for (std::size_t i = 0; i < dk; ++i) {
            cplx acc = 0.0;
            const cplx* row = op.row(i).data();
            for (std::size_t j = 0; j < dk; ++j) {
                acc += row[j] * in[j];
            }
            out[i] = acc;
        }
        for (std::size_t j = 0; j < dk; ++j) {
            amps[base | table[j]] = out[j];
        }
    });
}

// ---------------------------------------------------------------------------
// Partial traces.

/// tr over the complement of `keep` of an operator on n qubits. The kept
/// factor is ordered as `keep` lists its qubits.
inline Matrix partial_trace(const Matrix& m, std::size_t n, const Region& keep) {
    if (!m.square() || m.rows() != qubit_dim(n)) {
        throw std::invalid_argument("partial_trace: matrix is not 2^n x 2^n");
    }
    keep.validate(n);
    const auto keep_table = scatter_table(n, keep);
    const Region traced = keep.complement(n);
    const auto traced_table = scatter_table(n, traced);
    const std::size_t dk = keep_table.size();
    Matrix out(dk, dk);
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            cplx acc = 0.0;
            for (const auto t : traced_table) {
                acc += m(keep_table[i] | t, keep_table[j] | t);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

/// Reduced density matrix tr_rest |s><s| on `keep`.
inline Matrix reduced_density(const StateVector& s, const Region& keep) {
    const std::size_t m = s.num_qubits();
    keep.validate(m);
    const auto keep_table = scatter_table(m, keep);
    const std::uint64_t keep_mask = keep.mask(m);
    const std::size_t dk = keep_table.size();
    Matrix rho(dk, dk);
    std::vector<cplx> slice(dk);
    for_each_outside(s.dim() - 1, keep_mask, [&](std::uint64_t base) {
        for (std::size_t i = 0; i < dk; ++i) {
            slice[i] = s[base | keep_table[i]];
        }
        for (std::size_t i = 0; i < dk; ++i) {
            if (slice[i] == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < dk; ++j) {
                rho(i, j) += slice[i] * std::conj(slice[j]);
            }
        }
    });
    return rho;
}

/// tr_{rest}(L^dagger R) for n-qubit operators L, R without forming L^dagger R.
/// Cost O(d_keep * d^2).
inline Matrix partial_trace_adjoint_product(const Matrix& lhs, const Matrix& rhs, std::size_t n, const Region& keep) {
    const std::size_t d = qubit_dim(n);
    if (lhs.rows() != d || lhs.cols() != d || rhs.rows() != d || rhs.cols() != d) {
        throw std::invalid_argument("partial_trace_adjoint_product: operators must be 2^n x 2^n");
    }
    const auto keep_table = scatter_table(n, keep);
    const auto traced_table = scatter_table(n, keep.complement(n));
    const std::size_t dk = keep_table.size();
    Matrix out(dk, dk);
    // (L^dagger R)_{(i,t),(j,t)} = sum_k conj(L[k, (i,t)]) R[k, (j,t)]
    for (std::size_t k = 0; k < d; ++k) {
        const cplx* lrow = lhs.row(k).data();
        const cplx* rrow = rhs.row(k).data();
        for (std::size_t i = 0; i < dk; ++i) {
            for (std::size_t j = 0; j < dk; ++j) {
                cplx acc = 0.0;
                for (const auto t : traced_table) {
                    acc += std::conj(lrow[keep_table[i] | t]) * rrow[keep_table[j] | t];
                }
                out(i, j) += acc;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pauli traces.

/// tr(U^dagger P_C V P_A) in O(d^2) using index actions of both Paulis.
inline cplx pauli_sandwich_trace(const DenseUnitary& u, const DenseUnitary& v, const Pauli& p_c, const Pauli& p_a) {
    const std::size_t n = u.num_qubits();
    if (v.num_qubits() != n || p_c.num_qubits() != n || p_a.num_qubits() != n) {
        throw std::invalid_argument("pauli_sandwich_trace: qubit counts differ");
    }
    const std::size_t d = u.dim();
    const PauliAction ac(p_c), aa(p_a);
    // tr = sum_{k,i} conj(U[xc^k, i]) phase_c(k) V[k, xa^i] phase_a(i)
    cplx total = 0.0;
    for (std::uint64_t k = 0; k < d; ++k) {
        const cplx* urow = u.matrix().row(ac.target(k)).data();
        const cplx* vrow = v.matrix().row(k).data();
        cplx acc = 0.0;
        for (std::uint64_t i = 0; i < d; ++i) {
            acc += std::conj(urow[i]) * vrow[aa.target(i)] * aa.phase(i);
        }
        total += ac.phase(k) * acc;
    }
    return total;
}

/// Coefficients c_P = tr(P^dagger M)/d over all phase-free n-qubit Paulis,
/// in enumerate_region order. Costs 4^n d; meant for small oracles.
inline std::vector<cplx> pauli_decomposition(const Matrix& m) {
    const std::size_t n = log2_dim(m.rows(), "pauli_decomposition");
    const std::size_t d = m.rows();
    const auto paulis = enumerate_region(n, Region::range(0, n));
    std::vector<cplx> coeffs;
    coeffs.reserve(paulis.size());
    for (const auto& p : paulis) {
        PauliAction a(p);
        // tr(P^dagger M) = sum_i conj(<t(i)|P|i>) M[t(i), i]
        cplx acc = 0.0;
        for (std::uint64_t i = 0; i < d; ++i) {
            acc += std::conj(a.phase(i)) * m(a.target(i), i);
        }
        coeffs.push_back(acc / static_cast<double>(d));
    }
    return coeffs;
}

// ---------------------------------------------------------------------------
// EPR pairs.

/// (1/sqrt(2^k)) sum_i |i>|i> on 2k qubits; the first k qubits hold the first half.
inline StateVector epr_state(std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("epr_state: need at least one qubit per half");
    }
    check_state_qubits(2 * k, "epr_state");
    const std::size_t dk = qubit_dim(k);
    std::vector<cplx> amps(dk * dk, 0.0);
    const double a = 1.0 / std::sqrt(static_cast<double>(dk));
    for (std::size_t i = 0; i < dk; ++i) {
        amps[(i << k) | i] = a;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

namespace detail {

struct PairLayout {
    std::vector<std::uint64_t> table1, table2;
    std::uint64_t mask = 0;
};

inline PairLayout pair_layout(std::size_t m, const Region& half1, const Region& half2) {
    if (half1.size() != half2.size()) {
        throw std::invalid_argument("EPR projection: halves have different sizes");
    }
    for (auto q : half1) {
        if (half2.contains(q)) {
            throw std::invalid_argument("EPR projection: halves overlap");
        }
    }
    PairLayout l;
    l.table1 = scatter_table(m, half1);
    l.table2 = scatter_table(m, half2);
    l.mask = half1.mask(m) | half2.mask(m);
    return l;
}

}  // namespace detail

/// <s| Pi |s> for the EPR projector pairing half1[k] with half2[k].
inline double epr_overlap(const StateVector& s, const Region& half1, const Region& half2) {
    const auto l = detail::pair_layout(s.num_qubits(), half1, half2);
    const std::size_t dh = l.table1.size();
    const double inv = 1.0 / static_cast<double>(dh);
    double prob = 0.0;
    for_each_outside(s.dim() - 1, l.mask, [&](std::uint64_t base) {
        cplx amp = 0.0;
        for (std::size_t i = 0; i < dh; ++i) {
            amp += s[base | l.table1[i] | l.table2[i]];
        }
        prob += std::norm(amp) * inv;
    });
    return prob;
}

struct Projection {
    StateVector state;
    double probability;
};

/// Applies the EPR projector on (half1, half2), returning the renormalized
/// state and the pre-normalization probability <s|Pi|s>.
inline Projection project_epr(const StateVector& s, const Region& half1, const Region& half2, double threshold = 1e-14) {
    const auto l = detail::pair_layout(s.num_qubits(), half1, half2);
    const std::size_t dh = l.table1.size();
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
    std::vector<cplx> out(s.dim(), 0.0);
    double prob = 0.0;
    for_each_outside(s.dim() - 1, l.mask, [&](std::uint64_t base) {
        cplx amp = 0.0;
        for (std::size_t i = 0; i < dh; ++i) {
            amp += s[base | l.table1[i] | l.table2[i]];
        }
        amp *= inv_sqrt;  // <EPR| s>_rest
        prob += std::norm(amp);
        for (std::size_t i = 0; i < dh; ++i) {
            out[base | l.table1[i] | l.table2[i]] = amp * inv_sqrt;
        }
    });
    if (prob < threshold) {
        throw ProjectionError("project_epr: post-selection probability " + std::to_string(prob) + " below threshold", prob);
    }
    auto state = StateVector::from_amplitudes(std::move(out));
    state.normalize();
    return {std::move(state), prob};
}

// ---------------------------------------------------------------------------
// Random ensembles used by tests and ψ sampling.

/// Haar-random pure state on m qubits.
inline StateVector haar_state(std::size_t m, Rng& rng) {
    check_state_qubits(m, "haar_state");
    std::vector<cplx> amps(qubit_dim(m));
    for (auto& a : amps) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = {re, im};
    }
    auto s = StateVector::from_amplitudes(std::move(amps));
    s.normalize();
    return s;
}

/// Haar-random unitary via modified Gram-Schmidt on a complex Ginibre matrix.
inline DenseUnitary haar_unitary(std::size_t n, Rng& rng) {
    check_matrix_qubits(n, "haar_unitary");
    const std::size_t d = qubit_dim(n);
    // Columns are stored as rows of `q` during orthogonalization.
    Matrix q(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            q(r, c) = {re, im};
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        cplx* vj = q.row(j).data();
        for (std::size_t pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                const cplx* vk = q.row(k).data();
                cplx proj = 0.0;
                for (std::size_t t = 0; t < d; ++t) {
                    proj += std::conj(vk[t]) * vj[t];
                }
                for (std::size_t t = 0; t < d; ++t) {
                    vj[t] -= proj * vk[t];
                }
            }
        }
        double nrm = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            nrm += std::norm(vj[t]);
        }
        const double inv = 1.0 / std::sqrt(nrm);
        for (std::size_t t = 0; t < d; ++t) {
            vj[t] *= inv;
        }
    }
    return DenseUnitary::from_matrix(q.transpose(), 1e-9);
}

}  // namespace hpdecode
