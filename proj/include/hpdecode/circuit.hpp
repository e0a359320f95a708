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

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpdecode/gate.hpp"
#include "hpdecode/linalg.hpp"
#include "hpdecode/rng.hpp"

namespace hpdecode {

/// An ordered gate list on n qubits; the first gate acts first.
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(std::size_t n) : n_(n) {}

    std::size_t num_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    /// Number of T gates.
    std::size_t t_count() const { return t_; }

    std::optional<std::uint64_t> seed() const { return seed_; }
    void set_seed(std::uint64_t seed) { seed_ = seed; }

    void append(const Gate& g) {
        g.validate(n_);
        gates_.push_back(g);
        if (g.kind == GateKind::T) {
            ++t_;
        }
    }

    void append(const Circuit& other) {
        if (other.n_ != n_) {
            throw std::invalid_argument("Circuit::append: qubit counts differ");
        }
        for (const auto& g : other.gates_) {
            append(g);
        }
    }

    bool clifford() const { return t_ == 0; }

    /// Text form: a header of `n <count>` and optional `seed <value>`, then one
    /// `KIND q [q2]` line per gate. Lines starting with '#' are comments.
    std::string str() const {
        std::ostringstream out;
        out << "n " << n_ << '\n';
        if (seed_) {
            out << "seed " << *seed_ << '\n';
        }
        for (const auto& g : gates_) {
            out << g.str() << '\n';
        }
        return out.str();
    }

    static Circuit parse(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        std::optional<Circuit> c;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(line);
            std::string word;
            if (!(ls >> word) || word[0] == '#') {
                continue;
            }
            auto fail = [&](const std::string& why) {
                return std::invalid_argument("Circuit::parse line " + std::to_string(line_no) + ": " + why);
            };
            if (word == "n") {
                std::size_t n;
                if (c || !(ls >> n)) {
                    throw fail("bad or repeated qubit-count header");
                }
                c.emplace(n);
                continue;
            }
            if (!c) {
                throw fail("gate before the 'n' header");
            }
            if (word == "seed") {
                std::uint64_t s;
                if (!(ls >> s)) {
                    throw fail("bad seed");
                }
                c->set_seed(s);
                continue;
            }
            Gate g;
            try {
                g.kind = parse_gate_kind(word);
            } catch (const std::invalid_argument& e) {
                throw fail(e.what());
            }
            if (!(ls >> g.q0) || (g.two_qubit() && !(ls >> g.q1))) {
                throw fail("missing qubit index");
            }
            std::string extra;
            if (ls >> extra) {
                throw fail("trailing token '" + extra + "'");
            }
            try {
                c->append(g);
            } catch (const std::exception& e) {
                throw fail(e.what());
            }
        }
        if (!c) {
            throw std::invalid_argument("Circuit::parse: missing 'n' header");
        }
        return *c;
    }

    bool operator==(const Circuit& other) const { return n_ == other.n_ && gates_ == other.gates_; }

  private:
    std::size_t n_ = 0;
    std::vector<Gate> gates_;
    std::size_t t_ = 0;
    std::optional<std::uint64_t> seed_;
};

/// One random gate from {CNOT, H, P}: kind uniform ({H, P} when n == 1),
/// qubits uniform, CNOT on an ordered pair of distinct qubits.
inline Gate propose_clifford_gate(std::size_t n, Rng& rng) {
    if (n == 0) {
        throw std::invalid_argument("propose_clifford_gate: need at least one qubit");
    }
    const auto kinds = n >= 2 ? 3u : 2u;
    const auto k = rng.uniform_below(kinds);
    if (n >= 2 && k == 2) {
        const auto control = static_cast<std::uint32_t>(rng.uniform_below(n));
        auto target = static_cast<std::uint32_t>(rng.uniform_below(n - 1));
        if (target >= control) {
            ++target;
        }
        return Gate::cnot(control, target);
    }
    const auto q = static_cast<std::uint32_t>(rng.uniform_below(n));
    return k == 0 ? Gate::h(q) : Gate::p(q);
}

inline Circuit sample_random_clifford(std::size_t n, std::size_t length, Rng& rng) {
    Circuit c(n);
    for (std::size_t k = 0; k < length; ++k) {
        c.append(propose_clifford_gate(n, rng));
    }
    return c;
}

/// Clifford block, then t rounds of (T on a uniformly random qubit, Clifford block).
inline Circuit sample_doped_circuit(std::size_t n, std::size_t t, std::size_t gates_per_layer, Rng& rng) {
    Circuit c = sample_random_clifford(n, gates_per_layer, rng);
    for (std::size_t layer = 0; layer < t; ++layer) {
        c.append(Gate::t(static_cast<std::uint32_t>(rng.uniform_below(n))));
        c.append(sample_random_clifford(n, gates_per_layer, rng));
    }
    return c;
}

/// Default Clifford block length for an n-qubit layer.
inline std::size_t default_gates_per_layer(std::size_t n) { return 3 * n * n; }

inline DenseUnitary synthesize_dense(const Circuit& c) {
    DenseUnitary u = DenseUnitary::identity(c.num_qubits());
    for (const auto& g : c.gates()) {
        apply_gate(g, u);
    }
    return u;
}

}  // namespace hpdecode
