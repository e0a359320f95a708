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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hpdecode {

using cplx = std::complex<double>;

// Basis-index convention shared by every module: qubit 0 is the most
// significant bit of a computational-basis index. For an n-qubit register,
// qubit q lives at bit position (n - 1 - q).
inline constexpr std::uint64_t qubit_bit(std::size_t n, std::size_t q) {
    return std::uint64_t{1} << (n - 1 - q);
}

// i^k for k mod 4, exact.
inline cplx i_pow(unsigned k) {
    switch (k & 3u) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// Ordered set of distinct qubit indices (a subsystem such as A, B, C or D).
class Region {
  public:
    Region() = default;
    Region(std::initializer_list<std::size_t> qubits) : qubits_(qubits) { check_distinct(); }
    explicit Region(std::vector<std::size_t> qubits) : qubits_(std::move(qubits)) { check_distinct(); }

    /// Contiguous range [first, first + count).
    static Region range(std::size_t first, std::size_t count) {
        std::vector<std::size_t> q(count);
        for (std::size_t k = 0; k < count; ++k) {
            q[k] = first + k;
        }
        return Region(std::move(q));
    }

    /// Every qubit of [0, n) not in this region, in increasing order.
    Region complement(std::size_t n) const {
        validate(n);
        std::vector<std::size_t> rest;
        for (std::size_t q = 0; q < n; ++q) {
            if (!contains(q)) {
                rest.push_back(q);
            }
        }
        return Region(std::move(rest));
    }

    void validate(std::size_t n) const {
        for (auto q : qubits_) {
            if (q >= n) {
                throw std::out_of_range("Region: qubit " + std::to_string(q) + " outside [0, " + std::to_string(n) + ")");
            }
        }
    }

    bool contains(std::size_t q) const { return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end(); }
    std::size_t size() const { return qubits_.size(); }
    bool empty() const { return qubits_.empty(); }
    std::size_t operator[](std::size_t k) const { return qubits_[k]; }
    const std::vector<std::size_t>& qubits() const { return qubits_; }
    auto begin() const { return qubits_.begin(); }
    auto end() const { return qubits_.end(); }

    /// Bit mask of the region inside an n-qubit basis index.
    std::uint64_t mask(std::size_t n) const {
        validate(n);
        std::uint64_t m = 0;
        for (auto q : qubits_) {
            m |= qubit_bit(n, q);
        }
        return m;
    }

    bool operator==(const Region&) const = default;

  private:
    void check_distinct() const {
        auto sorted = qubits_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("Region: duplicate qubit index");
        }
    }

    std::vector<std::size_t> qubits_;
};

/// n-qubit Pauli operator i^phase * (sigma_0 (x) ... (x) sigma_{n-1}).
///
/// Each sigma is one of I, X, Y, Z, encoded by the symplectic pair (x, z):
/// (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. Y is the Hermitian Pauli Y (= iXZ),
/// so a Pauli with phase 0 or 2 is Hermitian. Bits are packed 64 per word.
class Pauli {
  public:
    Pauli() = default;

    /// Identity on n qubits.
    explicit Pauli(std::size_t n) : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {}

    /// Parses e.g. "XYZ", "+IXZ", "-iXZI", "iY". Letters are qubit 0 first;
    /// '_' is accepted as identity.
    static Pauli from_string(std::string_view text) {
        unsigned phase = 0;
        std::size_t pos = 0;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') {
                phase = 2;
            }
            ++pos;
        }
        if (pos < text.size() && text[pos] == 'i') {
            phase += 1;
            ++pos;
        }
        Pauli p(text.size() - pos);
        for (std::size_t q = 0; pos < text.size(); ++pos, ++q) {
            switch (text[pos]) {
                case 'I': case '_': break;
                case 'X': p.set(q, true, false); break;
                case 'Y': p.set(q, true, true); break;
                case 'Z': p.set(q, false, true); break;
                default: throw std::invalid_argument("Pauli::from_string: bad character in '" + std::string(text) + "'");
            }
        }
        p.phase_ = static_cast<std::uint8_t>(phase & 3u);
        return p;
    }

    /// Single-qubit letter ('I','X','Y','Z') on qubit q of an n-qubit register.
    static Pauli single(std::size_t n, std::size_t q, char letter) {
        if (q >= n) {
            throw std::out_of_range("Pauli::single: qubit out of range");
        }
        Pauli p(n);
        switch (letter) {
            case 'I': break;
            case 'X': p.set(q, true, false); break;
            case 'Y': p.set(q, true, true); break;
            case 'Z': p.set(q, false, true); break;
            default: throw std::invalid_argument("Pauli::single: bad letter");
        }
        return p;
    }

    /// Builds from per-qubit symplectic bits and a phase exponent.
    static Pauli from_bits(const std::vector<bool>& xs, const std::vector<bool>& zs, unsigned phase = 0) {
        if (xs.size() != zs.size()) {
            throw std::invalid_argument("Pauli::from_bits: x and z lengths differ");
        }
        Pauli p(xs.size());
        for (std::size_t q = 0; q < xs.size(); ++q) {
            p.set(q, xs[q], zs[q]);
        }
        p.phase_ = static_cast<std::uint8_t>(phase & 3u);
        return p;
    }

    std::size_t num_qubits() const { return n_; }
    unsigned phase() const { return phase_; }
    bool x(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1u; }
    bool z(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1u; }

    char letter(std::size_t q) const {
        static constexpr char kLetters[4] = {'I', 'Z', 'X', 'Y'};
        return kLetters[(x(q) ? 2 : 0) | (z(q) ? 1 : 0)];
    }

    Pauli with_phase(unsigned phase) const {
        Pauli p = *this;
        p.phase_ = static_cast<std::uint8_t>(phase & 3u);
        return p;
    }

    Pauli negated() const { return with_phase(phase_ + 2); }

    /// True when every letter is I (phase ignored).
    bool is_identity() const {
        for (std::size_t w = 0; w < x_.size(); ++w) {
            if (x_[w] | z_[w]) {
                return false;
            }
        }
        return true;
    }

    std::size_t weight() const {
        std::size_t total = 0;
        for (std::size_t w = 0; w < x_.size(); ++w) {
            total += static_cast<std::size_t>(std::popcount(x_[w] | z_[w]));
        }
        return total;
    }

    /// True when the operator acts as identity on every qubit outside `r`.
    bool supported_in(const Region& r) const {
        for (std::size_t q = 0; q < n_; ++q) {
            if ((x(q) || z(q)) && !r.contains(q)) {
                return false;
            }
        }
        return true;
    }

    /// "+XYZ", "+iXYZ", "-XYZ", "-iXYZ".
    std::string str() const {
        static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
        std::string out = kPrefix[phase_];
        for (std::size_t q = 0; q < n_; ++q) {
            out.push_back(letter(q));
        }
        return out;
    }

    /// X components as an n-qubit basis-index mask (qubit 0 = MSB). Requires n <= 64.
    std::uint64_t x_index_mask() const { return index_mask(x_); }
    std::uint64_t z_index_mask() const { return index_mask(z_); }

    const std::vector<std::uint64_t>& x_words() const { return x_; }
    const std::vector<std::uint64_t>& z_words() const { return z_; }

    bool operator==(const Pauli&) const = default;

    friend Pauli operator*(const Pauli& p, const Pauli& q);

    /// In-place edits, for builders such as the tableau update rules.
    void set(std::size_t q, bool xb, bool zb) {
        const std::uint64_t bit = std::uint64_t{1} << (q & 63);
        x_[q >> 6] = xb ? (x_[q >> 6] | bit) : (x_[q >> 6] & ~bit);
        z_[q >> 6] = zb ? (z_[q >> 6] | bit) : (z_[q >> 6] & ~bit);
    }
    void set_phase(unsigned phase) { phase_ = static_cast<std::uint8_t>(phase & 3u); }

  private:
    static std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

    std::uint64_t index_mask(const std::vector<std::uint64_t>& words) const {
        if (n_ > 64) {
            throw std::length_error("Pauli: basis-index masks need n <= 64");
        }
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < n_; ++q) {
            if ((words[q >> 6] >> (q & 63)) & 1u) {
                m |= qubit_bit(n_, q);
            }
        }
        return m;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> x_;
    std::vector<std::uint64_t> z_;
    std::uint8_t phase_ = 0;
};

/// Product p*q with exact phase tracking.
inline Pauli operator*(const Pauli& p, const Pauli& q) {
    if (p.n_ != q.n_) {
        throw std::invalid_argument("Pauli product: qubit counts differ");
    }
    Pauli r(p.n_);
    // Per-qubit letter products contribute +i for XY, YZ, ZX and -i for XZ, YX, ZY.
    int log_i = static_cast<int>(p.phase_) + static_cast<int>(q.phase_);
    for (std::size_t w = 0; w < p.x_.size(); ++w) {
        const std::uint64_t px = p.x_[w], pz = p.z_[w], qx = q.x_[w], qz = q.z_[w];
        const std::uint64_t pX = px & ~pz, pY = px & pz, pZ = ~px & pz;
        const std::uint64_t qX = qx & ~qz, qY = qx & qz, qZ = ~qx & qz;
        const std::uint64_t plus = (pX & qY) | (pY & qZ) | (pZ & qX);
        const std::uint64_t minus = (pX & qZ) | (pY & qX) | (pZ & qY);
        log_i += std::popcount(plus) - std::popcount(minus);
        r.x_[w] = px ^ qx;
        r.z_[w] = pz ^ qz;
    }
    r.phase_ = static_cast<std::uint8_t>(((log_i % 4) + 4) % 4);
    return r;
}

inline Pauli pauli_multiply(const Pauli& p, const Pauli& q) { return p * q; }

/// True iff the symplectic form x_p.z_q + z_p.x_q vanishes mod 2.
inline bool commutes(const Pauli& p, const Pauli& q) {
    if (p.num_qubits() != q.num_qubits()) {
        throw std::invalid_argument("commutes: qubit counts differ");
    }
    unsigned parity = 0;
    const auto& px = p.x_words();
    const auto& pz = p.z_words();
    const auto& qx = q.x_words();
    const auto& qz = q.z_words();
    for (std::size_t w = 0; w < px.size(); ++w) {
        parity ^= static_cast<unsigned>(std::popcount((px[w] & qz[w]) ^ (pz[w] & qx[w]))) & 1u;
    }
    return parity == 0;
}

/// All 4^|r| phase-free Paulis supported on r, identity first. Ordering is
/// base-4 with digits I,X,Y,Z and the first region qubit most significant.
inline std::vector<Pauli> enumerate_region(std::size_t n, const Region& r) {
    r.validate(n);
    const std::size_t k = r.size();
    if (2 * k >= 63) {
        throw std::length_error("enumerate_region: region too large");
    }
    const std::size_t count = std::size_t{1} << (2 * k);
    std::vector<Pauli> out;
    out.reserve(count);
    static constexpr char kDigit[4] = {'I', 'X', 'Y', 'Z'};
    for (std::size_t idx = 0; idx < count; ++idx) {
        Pauli p(n);
        for (std::size_t j = 0; j < k; ++j) {
            const unsigned digit = static_cast<unsigned>((idx >> (2 * (k - 1 - j))) & 3u);
            if (digit != 0) {
                p = p * Pauli::single(n, r[j], kDigit[digit]);
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Column action of a Pauli on a basis state: P|i> = phase * |target>.
struct BasisAction {
    std::uint64_t target;
    cplx phase;
};

/// Precomputed index action for hot loops. P|i> = i^(base + 2*parity(z & i)) |i ^ x>.
class PauliAction {
  public:
    PauliAction() = default;
    explicit PauliAction(const Pauli& p)
        : x_mask_(p.x_index_mask()), z_mask_(p.z_index_mask()), dim_(std::uint64_t{1} << p.num_qubits()) {
        // Y = iXZ contributes a factor i per Y letter.
        const unsigned num_y = static_cast<unsigned>(std::popcount(x_mask_ & z_mask_));
        base_ = (p.phase() + num_y) & 3u;
    }

    std::uint64_t target(std::uint64_t i) const { return i ^ x_mask_; }

    unsigned log_i(std::uint64_t i) const {
        return (base_ + 2u * (static_cast<unsigned>(std::popcount(z_mask_ & i)) & 1u)) & 3u;
    }

    cplx phase(std::uint64_t i) const { return i_pow(log_i(i)); }

    std::uint64_t x_mask() const { return x_mask_; }
    std::uint64_t z_mask() const { return z_mask_; }
    std::uint64_t dim() const { return dim_; }

  private:
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
    std::uint64_t dim_ = 1;
    unsigned base_ = 0;
};

inline BasisAction index_action(const Pauli& p, std::uint64_t i) {
    if (p.num_qubits() >= 64 || i >= (std::uint64_t{1} << p.num_qubits())) {
        throw std::out_of_range("index_action: basis index out of range");
    }
    PauliAction a(p);
    return {a.target(i), a.phase(i)};
}

}  // namespace hpdecode
