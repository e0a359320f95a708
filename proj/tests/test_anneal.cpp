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

#include "hpdecode/anneal.hpp"

#include <gtest/gtest.h>

#include "hpdecode/tableau.hpp"

using namespace hpdecode;

namespace {

Circuit doped(std::size_t n, std::size_t t, std::uint64_t seed) {
    Rng rng(seed);
    return sample_doped_circuit(n, t, default_gates_per_layer(n), rng);
}

AnnealConfig quick_config(std::uint64_t seed) {
    AnnealConfig cfg;
    cfg.seed = seed;
    cfg.t_max_factor = 20.0;
    return cfg;
}

}  // namespace

TEST(metropolis, keep_rule) {
    const double inf_beta = 1e300;
    for (auto rule : {AcceptanceRule::standard, AcceptanceRule::literal}) {
        EXPECT_TRUE(AnnealState::keep(0.3, 0.5, 0.999, 250.0, rule));
        EXPECT_TRUE(AnnealState::keep(0.3, 0.3, 0.999, 250.0, rule));
        EXPECT_TRUE(AnnealState::keep(0.0, 0.0, 0.5, 250.0, rule));
    }
    EXPECT_FALSE(AnnealState::keep(0.5, 0.4, 0.0, inf_beta, AcceptanceRule::standard));
    EXPECT_TRUE(AnnealState::keep(0.5, 0.4, 0.0, inf_beta, AcceptanceRule::literal));
    EXPECT_TRUE(AnnealState::keep(0.5, 0.0, 0.3, 0.0, AcceptanceRule::standard));
    EXPECT_FALSE(AnnealState::keep(0.5, 0.0, 0.3, 250.0, AcceptanceRule::standard));
    // Boltzmann weight exp(-beta (1/F - 1/F_old)) = exp(-1) for beta = 1, F: 0.5 -> 1/3.
    const double w = std::exp(-1.0);
    EXPECT_TRUE(AnnealState::keep(0.5, 1.0 / 3.0, w - 1e-9, 1.0, AcceptanceRule::standard));
    EXPECT_FALSE(AnnealState::keep(0.5, 1.0 / 3.0, w + 1e-9, 1.0, AcceptanceRule::standard));
    EXPECT_FALSE(AnnealState::keep(0.5, 1.0 / 3.0, w - 1e-9, 1.0, AcceptanceRule::literal));
    EXPECT_TRUE(AnnealState::keep(0.5, 1.0 / 3.0, w + 1e-9, 1.0, AcceptanceRule::literal));
}

TEST(metropolis, config_defaults_and_validation) {
    AnnealConfig cfg;
    EXPECT_EQ(cfg.beta, 250.0);
    EXPECT_EQ(cfg.max_steps(Partition(10, 2, 1)), 10000u);
    EXPECT_EQ(cfg.max_steps(Partition(10, 2, 2)), 30000u);
    cfg.beta = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.beta = 1.0;
    cfg.t_max_factor = 0.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    AnnealConfig round = nlohmann::json(quick_config(9)).get<AnnealConfig>();
    EXPECT_EQ(round, quick_config(9));
}

TEST(metropolis, infinite_temperature_accepts_everything) {
    const Partition part(4, 1, 1);
    AnnealConfig cfg = quick_config(3);
    cfg.beta = 0.0;
    cfg.target_mode = TargetMode::none;
    const auto res = train(doped(4, 1, 1), part, cfg);
    EXPECT_EQ(res.steps, cfg.max_steps(part));
    EXPECT_EQ(res.accepted, res.steps);
    EXPECT_EQ(res.v.size(), res.steps);
}

TEST(metropolis, zero_temperature_never_worsens) {
    const Partition part(5, 2, 1);
    AnnealConfig cfg = quick_config(4);
    cfg.beta = 1e300;
    const auto res = train(doped(5, 2, 2), part, cfg);
    for (std::size_t k = 1; k < res.trajectory.size(); ++k) {
        EXPECT_GE(res.trajectory[k], res.trajectory[k - 1]);
    }
}

TEST(metropolis, result_is_consistent) {
    const Partition part(5, 2, 1);
    const Circuit uc = doped(5, 2, 5);
    const auto u = synthesize_dense(uc);
    const auto res = train(uc, part, quick_config(6));
    ASSERT_FALSE(res.trajectory.empty());
    EXPECT_EQ(res.trajectory.size(), res.steps + 1);
    EXPECT_EQ(res.trajectory.back(), res.final_fidelity);
    EXPECT_EQ(res.v.size(), res.accepted);
    EXPECT_NEAR(res.final_fidelity, fidelity(u, synthesize_dense(res.v), part), 1e-10);
    EXPECT_NEAR(res.overlap_uv, learnability_overlap(u, synthesize_dense(res.v)), 1e-10);
    EXPECT_EQ(res.v.t_count(), 0u);
    EXPECT_NO_THROW(CliffordTableau::from_circuit(res.v));
    EXPECT_NEAR(res.target, ideal_fidelity(u, part), 1e-12);
    EXPECT_EQ(res.reached_target, res.final_fidelity >= res.target - 1e-12);
    if (!res.reached_target) {
        EXPECT_EQ(res.steps, quick_config(6).max_steps(part));
    }
}

TEST(metropolis, deterministic_given_seed) {
    const Partition part(5, 1, 1);
    const Circuit uc = doped(5, 3, 7);
    const auto a = train(uc, part, quick_config(8));
    const auto b = train(synthesize_dense(uc), part, quick_config(8));
    EXPECT_EQ(a.trajectory, b.trajectory);
    EXPECT_EQ(a.v, b.v);
    const auto c = train(uc, part, quick_config(9));
    EXPECT_NE(a.trajectory, c.trajectory);
}

TEST(metropolis, learns_clifford_scrambler) {
    const Partition part(5, 1, 1);
    int reached = 0;
    for (std::uint64_t k = 0; k < 5; ++k) {
        AnnealConfig cfg;
        cfg.seed = 100 + k;
        const auto res = train(doped(5, 0, 50 + k), part, cfg);
        reached += res.reached_target ? 1 : 0;
        EXPECT_GT(res.final_fidelity, 0.9);
    }
    EXPECT_GE(reached, 4);
}

TEST(metropolis, doped_ansatz_respects_budget) {
    const Partition part(4, 1, 1);
    AnnealConfig cfg = quick_config(10);
    cfg.ansatz = Ansatz::doped;
    cfg.t_budget = 2;
    cfg.t_probability = 0.9;
    cfg.beta = 0.0;
    cfg.target_mode = TargetMode::none;
    const auto res = train(doped(4, 2, 11), part, cfg);
    EXPECT_EQ(res.v.t_count(), 2u);
}

TEST(metropolis, checkpoint_resume_is_bit_identical) {
    const Partition part(5, 2, 1);
    const Circuit uc = doped(5, 3, 12);
    AnnealConfig cfg = quick_config(13);
    cfg.target_mode = TargetMode::none;
    const auto full = train(uc, part, cfg);
    nlohmann::json snap;
    CheckpointHook stop{37, [&snap](const AnnealState& s, const Rng& rng) {
                            snap = checkpoint(s, rng);
                            return s.step() < 111;
                        }};
    EXPECT_THROW(train(uc, part, cfg, stop), TrainError);
    ASSERT_EQ(snap.at("step").get<std::size_t>(), 111u);
    const auto resumed = resume_train(nlohmann::json::parse(snap.dump()));
    EXPECT_EQ(resumed.trajectory, full.trajectory);
    EXPECT_EQ(resumed.v, full.v);
    EXPECT_EQ(resumed.final_fidelity, full.final_fidelity);
    EXPECT_EQ(resumed.accepted, full.accepted);
}

TEST(metropolis, resume_of_completed_run_returns_it) {
    const Partition part(4, 1, 1);
    const Circuit uc = doped(4, 0, 14);
    const auto u = synthesize_dense(uc);
    AnnealState s(u, part, quick_config(15), uc);
    Rng rng(15);
    while (!s.done()) {
        metropolis_step(s, rng);
    }
    const auto snap = checkpoint(s, rng);
    const auto res = resume_train(snap);
    EXPECT_EQ(res.trajectory, s.trajectory());
    EXPECT_EQ(res.v, s.v());
}

TEST(metropolis, snapshot_integrity_checks) {
    const Partition part(4, 1, 1);
    const Circuit uc = doped(4, 1, 16);
    AnnealState s(synthesize_dense(uc), part, quick_config(17), uc);
    Rng rng(17);
    for (int k = 0; k < 10; ++k) {
        metropolis_step(s, rng);
    }
    auto snap = checkpoint(s, rng);
    auto bad_hash = snap;
    bad_hash["u_hash"] = snap["u_hash"].get<std::uint64_t>() + 1;
    EXPECT_THROW(resume_train(bad_hash), std::runtime_error);
    auto bad_u = snap;
    bad_u["u_circuit"] = doped(4, 1, 99).str();
    EXPECT_THROW(resume_train(bad_u), std::runtime_error);
    auto bad_f = snap;
    bad_f["fidelity"] = snap["fidelity"].get<double>() + 1e-3;
    EXPECT_THROW(resume_train(bad_f), std::runtime_error);
    auto bad_rng = snap;
    bad_rng["rng"] = "garbage";
    EXPECT_THROW(resume_train(bad_rng), std::runtime_error);
    AnnealState no_circuit(synthesize_dense(uc), part, quick_config(17));
    EXPECT_THROW(no_circuit.snapshot(), std::logic_error);
}

TEST(metropolis, degenerate_start_is_scored_zero) {
    // U = Z_0 with n_C = 0 gives N = |tr(U^dagger V)|^2 = 0 at V = 1.
    const Partition part(2, 1, 0);
    Circuit uc(2);
    uc.append(Gate::p(0));
    uc.append(Gate::p(0));
    AnnealConfig cfg = quick_config(18);
    cfg.target_mode = TargetMode::fixed_threshold;
    cfg.threshold = 0.99;
    AnnealState s(synthesize_dense(uc), part, cfg, uc);
    EXPECT_EQ(s.fidelity(), 0.0);
    const auto res = train(uc, part, cfg);
    EXPECT_GT(res.final_fidelity, 0.0);
}
