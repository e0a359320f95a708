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

// Metropolis search for a decoder V over gate sequences. V starts at the
// identity; each step proposes V <- gV and keeps or undoes it based on the
// recovery fidelity F(U, gV). Energies are 1/F.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hpdecode/circuit.hpp"
#include "hpdecode/fidelity.hpp"
#include "hpdecode/partition.hpp"
#include "hpdecode/rng.hpp"
#include "hpdecode/scrambling.hpp"
#include "hpdecode/trace_kernel.hpp"

namespace hpdecode {

enum class TargetMode { ideal_fidelity, fixed_threshold, none };
enum class Ansatz { clifford, doped };
enum class AcceptanceRule { standard, literal };

inline std::string to_string(TargetMode m) {
    switch (m) {
        case TargetMode::ideal_fidelity: return "ideal_fidelity";
        case TargetMode::fixed_threshold: return "fixed_threshold";
        case TargetMode::none: return "none";
    }
    return "?";
}

inline std::string to_string(Ansatz a) { return a == Ansatz::clifford ? "clifford" : "doped"; }
inline std::string to_string(AcceptanceRule r) { return r == AcceptanceRule::standard ? "standard" : "literal"; }

inline TargetMode parse_target_mode(const std::string& s) {
    if (s == "ideal_fidelity") return TargetMode::ideal_fidelity;
    if (s == "fixed_threshold") return TargetMode::fixed_threshold;
    if (s == "none") return TargetMode::none;
    throw std::invalid_argument("unknown target mode '" + s + "'");
}

inline Ansatz parse_ansatz(const std::string& s) {
    if (s == "clifford") return Ansatz::clifford;
    if (s == "doped") return Ansatz::doped;
    throw std::invalid_argument("unknown ansatz '" + s + "' (expected clifford or doped)");
}

inline AcceptanceRule parse_acceptance(const std::string& s) {
    if (s == "standard") return AcceptanceRule::standard;
    if (s == "literal") return AcceptanceRule::literal;
    throw std::invalid_argument("unknown acceptance rule '" + s + "' (expected standard or literal)");
}

/// T_max = factor n^2 with factor 100 for n_C <= 1 and 300 otherwise, unless overridden.
inline double default_t_max_factor(const Partition& part) { return part.n_c <= 1 ? 100.0 : 300.0; }

/// 1 / (d_A^2 Omega) at the scrambling plateau.
inline double scrambling_threshold(const Partition& part) {
    const double da = static_cast<double>(part.d_a());
    return 1.0 / (da * da * part.scrambling_plateau());
}

struct AnnealConfig {
    double beta = 250.0;
    /// Zero selects default_t_max_factor.
    double t_max_factor = 0.0;
    TargetMode target_mode = TargetMode::ideal_fidelity;
    double threshold = 1.0;
    /// Halt once F >= target - halt_tolerance.
    double halt_tolerance = 1e-12;
    Ansatz ansatz = Ansatz::clifford;
    /// Doped ansatz: a T gate is proposed with this probability while budget remains.
    double t_probability = 0.25;
    std::size_t t_budget = std::numeric_limits<std::size_t>::max();
    AcceptanceRule acceptance = AcceptanceRule::standard;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(beta >= 0.0)) {
            throw std::invalid_argument("AnnealConfig: beta must be >= 0");
        }
        if (t_max_factor != 0.0 && !(t_max_factor >= 1.0)) {
            throw std::invalid_argument("AnnealConfig: t_max_factor must be >= 1");
        }
        if (!(t_probability >= 0.0 && t_probability <= 1.0)) {
            throw std::invalid_argument("AnnealConfig: t_probability must be in [0, 1]");
        }
        if (!(halt_tolerance >= 0.0)) {
            throw std::invalid_argument("AnnealConfig: halt_tolerance must be >= 0");
        }
    }

    std::size_t max_steps(const Partition& part) const {
        const double f = t_max_factor == 0.0 ? default_t_max_factor(part) : t_max_factor;
        return static_cast<std::size_t>(std::llround(f * static_cast<double>(part.n * part.n)));
    }

    bool operator==(const AnnealConfig&) const = default;
};

inline void to_json(nlohmann::json& j, const AnnealConfig& c) {
    j = nlohmann::json{{"beta", c.beta},
                       {"t_max_factor", c.t_max_factor},
                       {"target_mode", to_string(c.target_mode)},
                       {"threshold", c.threshold},
                       {"halt_tolerance", c.halt_tolerance},
                       {"ansatz", to_string(c.ansatz)},
                       {"t_probability", c.t_probability},
                       {"t_budget", c.t_budget},
                       {"acceptance", to_string(c.acceptance)},
                       {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, AnnealConfig& c) {
    AnnealConfig d;
    c.beta = j.value("beta", d.beta);
    c.t_max_factor = j.value("t_max_factor", d.t_max_factor);
    c.target_mode = parse_target_mode(j.value("target_mode", to_string(d.target_mode)));
    c.threshold = j.value("threshold", d.threshold);
    c.halt_tolerance = j.value("halt_tolerance", d.halt_tolerance);
    c.ansatz = parse_ansatz(j.value("ansatz", to_string(d.ansatz)));
    c.t_probability = j.value("t_probability", d.t_probability);
    c.t_budget = j.value("t_budget", d.t_budget);
    c.acceptance = parse_acceptance(j.value("acceptance", to_string(d.acceptance)));
    c.seed = j.value("seed", d.seed);
}

struct TrainResult {
    Circuit v;
    double final_fidelity = 0.0;
    std::vector<double> trajectory;
    std::size_t steps = 0;
    std::size_t accepted = 0;
    double wall_s = 0.0;
    AnnealConfig config;
    double overlap_uv = 0.0;
    double target = 0.0;
    bool reached_target = false;
};

/// Fidelity read off Theta. A vanishing numerator is scored as F = 0, its
/// limit as N -> 0 (the decoder then never returns the reference).
inline double learner_fidelity(const Matrix& theta, const SandwichTraces& traces) {
    try {
        return cost_from_gram(theta, traces).fidelity;
    } catch (const DegenerateCostError&) {
        return 0.0;
    }
}

/// Thrown when a run cannot continue; carries the partial result.
class TrainError : public std::runtime_error {
  public:
    TrainError(const std::string& what, TrainResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const TrainResult& partial() const { return partial_; }

  private:
    TrainResult partial_;
};

/// Thrown when a checkpoint hook asks the chain to stop.
class TrainInterrupted : public TrainError {
  public:
    using TrainError::TrainError;
};

/// FNV-1a of the circuit text, used to tie a snapshot to its U.
inline std::uint64_t circuit_hash(const Circuit& c) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : c.str()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

class AnnealState {
  public:
    /// Fresh chain at V = 1. `u_circuit`, when given, must synthesize to `u`
    /// and enables checkpoints.
    AnnealState(const DenseUnitary& u, const Partition& part, const AnnealConfig& cfg,
                std::optional<Circuit> u_circuit = std::nullopt)
        : part_(part), cfg_(cfg), u_circuit_(std::move(u_circuit)), gram_(u, part), traces_(part), v_(part.n) {
        cfg_.validate();
        max_steps_ = cfg_.max_steps(part_);
        switch (cfg_.target_mode) {
            case TargetMode::ideal_fidelity: target_ = ideal_fidelity(u, part_); break;
            case TargetMode::fixed_threshold: target_ = cfg_.threshold; break;
            case TargetMode::none: target_ = std::numeric_limits<double>::infinity(); break;
        }
        gram_.compute(theta_);
        f_ = learner_fidelity(theta_, traces_);
        trajectory_.push_back(f_);
    }

    const Partition& partition() const { return part_; }
    const AnnealConfig& config() const { return cfg_; }
    const Circuit& v() const { return v_; }
    double fidelity() const { return f_; }
    double target() const { return target_; }
    std::size_t step() const { return step_; }
    std::size_t accepted() const { return accepted_; }
    std::size_t max_steps() const { return max_steps_; }
    std::size_t t_used() const { return v_.t_count(); }
    const std::vector<double>& trajectory() const { return trajectory_; }
    Matrix v_matrix() const { return gram_.v_matrix(); }
    const std::optional<Circuit>& u_circuit() const { return u_circuit_; }

    bool reached_target() const { return f_ >= target_ - cfg_.halt_tolerance; }
    bool done() const { return reached_target() || step_ >= max_steps_; }

    /// Candidate gate for the next step.
    Gate propose(Rng& rng) const {
        if (cfg_.ansatz == Ansatz::doped && t_used() < cfg_.t_budget && rng.uniform01() < cfg_.t_probability) {
            return Gate::t(rng.uniform_below(part_.n));
        }
        return propose_clifford_gate(part_.n, rng);
    }

    /// Keep-or-undo decision for a move from f_old to f_new given uniform r.
    static bool keep(double f_old, double f_new, double r, double beta, AcceptanceRule rule) {
        if (!(f_new < f_old)) {
            return true;
        }
        const double delta = 1.0 / f_new - 1.0 / f_old;
        const double boltzmann = beta == 0.0 ? 1.0 : std::exp(-beta * delta);
        return rule == AcceptanceRule::standard ? r < boltzmann : !(r < boltzmann);
    }

    /// One proposal. Returns true if it was kept. r is drawn on every step so
    /// the stream position does not depend on the outcome.
    bool step_once(Rng& rng) {
        const Gate g = propose(rng);
        gram_.compute(scratch_, &g);
        const double f_new = learner_fidelity(scratch_, traces_);
        const double r = rng.uniform01();
        if (!std::isfinite(f_new)) {
            throw std::runtime_error("metropolis_step: non-finite fidelity after " + g.str());
        }
        const bool kept = keep(f_, f_new, r, cfg_.beta, cfg_.acceptance);
        if (kept) {
            gram_.apply_to_v(g);
            v_.append(g);
            std::swap(theta_, scratch_);
            f_ = f_new;
            ++accepted_;
        }
        ++step_;
        trajectory_.push_back(f_);
        return kept;
    }

    TrainResult result(const DenseUnitary& u, double wall_s) const {
        TrainResult out;
        out.v = v_;
        out.final_fidelity = f_;
        out.trajectory = trajectory_;
        out.steps = step_;
        out.accepted = accepted_;
        out.wall_s = wall_s;
        out.config = cfg_;
        out.target = target_;
        out.reached_target = reached_target();
        out.overlap_uv = learnability_overlap(u, DenseUnitary::from_matrix(gram_.v_matrix(), 1e-8));
        return out;
    }

    nlohmann::json snapshot() const {
        if (!u_circuit_) {
            throw std::logic_error("AnnealState::snapshot: U circuit unknown, cannot checkpoint");
        }
        nlohmann::json j;
        j["format"] = "hpdecode-anneal-1";
        j["partition"] = {{"n", part_.n}, {"n_a", part_.n_a}, {"n_c", part_.n_c}};
        j["config"] = cfg_;
        j["u_circuit"] = u_circuit_->str();
        j["u_hash"] = circuit_hash(*u_circuit_);
        j["v_circuit"] = v_.str();
        j["step"] = step_;
        j["accepted"] = accepted_;
        j["fidelity"] = f_;
        j["target"] = std::isfinite(target_) ? nlohmann::json(target_) : nlohmann::json(nullptr);
        j["trajectory"] = trajectory_;
        return j;
    }

    /// Rebuilds a chain from a snapshot. V is replayed gate by gate through
    /// the same kernel, so the dense V is bit-identical to the original.
    static AnnealState restore(const nlohmann::json& j) {
        if (j.value("format", "") != "hpdecode-anneal-1") {
            throw std::runtime_error("anneal snapshot: unknown format");
        }
        const Partition part(j.at("partition").at("n").get<std::size_t>(), j.at("partition").at("n_a").get<std::size_t>(),
                             j.at("partition").at("n_c").get<std::size_t>());
        const Circuit uc = Circuit::parse(j.at("u_circuit").get<std::string>());
        if (circuit_hash(uc) != j.at("u_hash").get<std::uint64_t>()) {
            throw std::runtime_error("anneal snapshot: U hash mismatch");
        }
        const DenseUnitary u = synthesize_dense(uc);
        AnnealState s(u, part, j.at("config").get<AnnealConfig>(), uc);
        const Circuit vc = Circuit::parse(j.at("v_circuit").get<std::string>());
        if (vc.num_qubits() != part.n) {
            throw std::runtime_error("anneal snapshot: V has the wrong qubit count");
        }
        for (const auto& g : vc.gates()) {
            s.gram_.apply_to_v(g);
            s.v_.append(g);
        }
        s.gram_.compute(s.theta_);
        s.f_ = j.at("fidelity").get<double>();
        if (learner_fidelity(s.theta_, s.traces_) != s.f_) {
            throw std::runtime_error("anneal snapshot: stored fidelity does not match V");
        }
        s.target_ = j.at("target").is_null() ? std::numeric_limits<double>::infinity() : j.at("target").get<double>();
        s.step_ = j.at("step").get<std::size_t>();
        s.accepted_ = j.at("accepted").get<std::size_t>();
        s.trajectory_ = j.at("trajectory").get<std::vector<double>>();
        if (s.trajectory_.size() != s.step_ + 1 || s.accepted_ != vc.size()) {
            throw std::runtime_error("anneal snapshot: inconsistent step counts");
        }
        return s;
    }

  private:
    Partition part_;
    AnnealConfig cfg_;
    std::optional<Circuit> u_circuit_;
    BlockGram gram_;
    SandwichTraces traces_;
    Circuit v_;
    Matrix theta_;
    Matrix scratch_;
    double f_ = 0.0;
    double target_ = 0.0;
    std::size_t step_ = 0;
    std::size_t accepted_ = 0;
    std::size_t max_steps_ = 0;
    std::vector<double> trajectory_;
};

inline bool metropolis_step(AnnealState& state, Rng& rng) { return state.step_once(rng); }

/// Called every `every` steps with the state and the RNG; return false to stop early.
struct CheckpointHook {
    std::size_t every = 0;
    std::function<bool(const AnnealState&, const Rng&)> fn;
};

namespace detail {

inline TrainResult run_chain(AnnealState& state, const DenseUnitary& u, Rng& rng, const CheckpointHook& hook) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    bool interrupted = false;
    try {
        while (!state.done() && !interrupted) {
            state.step_once(rng);
            if (hook.every != 0 && hook.fn && state.step() % hook.every == 0 && !state.done()) {
                interrupted = !hook.fn(state, rng);
            }
        }
    } catch (const std::exception& e) {
        throw TrainError(e.what(), state.result(u, elapsed()));
    }
    if (interrupted) {
        throw TrainInterrupted("training interrupted at step " + std::to_string(state.step()),
                               state.result(u, elapsed()));
    }
    return state.result(u, elapsed());
}

}  // namespace detail

/// Runs Algorithm-1 style training from V = 1 with the chain seeded by cfg.seed.
inline TrainResult train(const DenseUnitary& u, const Partition& part, const AnnealConfig& cfg,
                         const CheckpointHook& hook = {}) {
    AnnealState state(u, part, cfg);
    Rng rng(cfg.seed);
    return detail::run_chain(state, u, rng, hook);
}

/// Same, with U given as a circuit so the chain can be checkpointed.
inline TrainResult train(const Circuit& u_circuit, const Partition& part, const AnnealConfig& cfg,
                         const CheckpointHook& hook = {}) {
    const DenseUnitary u = synthesize_dense(u_circuit);
    AnnealState state(u, part, cfg, u_circuit);
    Rng rng(cfg.seed);
    return detail::run_chain(state, u, rng, hook);
}

/// Snapshot of a running chain: the state plus the RNG position.
inline nlohmann::json checkpoint(const AnnealState& state, const Rng& rng) {
    nlohmann::json j = state.snapshot();
    j["rng"] = rng.state();
    j["rng_algorithm"] = Rng::kAlgorithm;
    return j;
}

/// Continues a checkpointed chain to completion.
inline TrainResult resume_train(const nlohmann::json& snapshot, const CheckpointHook& hook = {}) {
    if (snapshot.value("rng_algorithm", "") != Rng::kAlgorithm) {
        throw std::runtime_error("anneal snapshot: RNG algorithm mismatch");
    }
    AnnealState state = AnnealState::restore(snapshot);
    Rng rng;
    rng.restore(snapshot.at("rng").get<std::string>());
    const DenseUnitary u = synthesize_dense(*state.u_circuit());
    return detail::run_chain(state, u, rng, hook);
}

}  // namespace hpdecode
