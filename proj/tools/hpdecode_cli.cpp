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
#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpdecode.hpp"

namespace {

using hpdecode::SweepConfig;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sweep flags; unset values leave the profile and config file untouched.
struct SweepFlags {
    std::optional<std::string> profile;
    std::string config_path;
    std::optional<std::size_t> n, n_a, n_c, t_min, t_max, t_step, realizations, gates_per_layer, doped_budget, jobs,
        checkpoint_every;
    std::optional<double> beta, tmax_factor, threshold;
    std::optional<std::string> ansatz, acceptance, target, psi, out;
    std::optional<std::uint64_t> seed;
    bool teleport = false;
    bool timing = false;

    void add_to(CLI::App& app) {
        app.add_option("--profile", profile, "base profile")->check(CLI::IsMember({"desk", "paper"}));
        app.add_option("--config", config_path, "JSON sweep config layered over the profile")
            ->check(CLI::ExistingFile);
        app.add_option("--n", n, "total qubits");
        app.add_option("--na", n_a, "qubits in A");
        app.add_option("--nc", n_c, "qubits in C");
        app.add_option("--t-min", t_min, "first doping level");
        app.add_option("--t-max", t_max, "last doping level");
        app.add_option("--t-step", t_step, "doping level stride");
        app.add_option("--realizations", realizations, "runs per doping level");
        app.add_option("--beta", beta, "inverse temperature");
        app.add_option("--tmax-factor", tmax_factor, "step cap is factor * n^2");
        app.add_option("--gates-per-layer", gates_per_layer, "Clifford gates per layer (0: 3 n^2)");
        app.add_option("--ansatz", ansatz, "decoder gate set")->check(CLI::IsMember({"clifford", "doped"}));
        app.add_option("--doped-budget", doped_budget, "T gates available to the doped ansatz (default: t)");
        app.add_option("--acceptance", acceptance, "Metropolis rule")->check(CLI::IsMember({"standard", "literal"}));
        app.add_option("--target", target, "halting target")
            ->check(CLI::IsMember({"ideal_fidelity", "fixed_threshold", "none"}));
        app.add_option("--threshold", threshold, "fidelity target for --target fixed_threshold");
        app.add_flag("--teleport", teleport, "also record teleportation fidelity");
        app.add_option("--psi", psi, "teleported state: haar or basis:<k>");
        app.add_option("--seed", seed, "master seed");
        app.add_option("--jobs", jobs, "worker threads");
        app.add_option("--out", out, "output directory (journal, checkpoints, results)");
        app.add_option("--checkpoint-every", checkpoint_every, "chain checkpoint interval in steps (0: off)");
        app.add_flag("--timing", timing, "record wall-clock seconds per run");
    }

    SweepConfig resolve() const {
        nlohmann::json file = nlohmann::json::object();
        if (!config_path.empty()) {
            file = nlohmann::json::parse(hpdecode::read_file(config_path));
        }
        std::string base = "desk";
        if (profile) {
            base = *profile;
        } else if (file.contains("profile") && !file.at("profile").is_null()) {
            base = file.at("profile").get<std::string>();
        }
        SweepConfig c = SweepConfig::profile(base);
        hpdecode::from_json(file, c);
        auto set = [](auto& field, const auto& opt) {
            if (opt) field = *opt;
        };
        set(c.n, n);
        set(c.n_a, n_a);
        set(c.n_c, n_c);
        set(c.t_min, t_min);
        set(c.t_max, t_max);
        set(c.t_step, t_step);
        set(c.realizations, realizations);
        set(c.gates_per_layer, gates_per_layer);
        set(c.jobs, jobs);
        set(c.checkpoint_every, checkpoint_every);
        set(c.seed, seed);
        set(c.psi, psi);
        set(c.out, out);
        set(c.anneal.beta, beta);
        set(c.anneal.t_max_factor, tmax_factor);
        set(c.anneal.threshold, threshold);
        if (doped_budget) c.doped_budget = *doped_budget;
        if (ansatz) c.anneal.ansatz = hpdecode::parse_ansatz(*ansatz);
        if (acceptance) c.anneal.acceptance = hpdecode::parse_acceptance(*acceptance);
        if (target) c.anneal.target_mode = hpdecode::parse_target_mode(*target);
        if (teleport) c.teleport = true;
        if (timing) c.timing = true;
        return c;
    }
};

void write_results(const hpdecode::RunTable& table, const std::string& format) {
    if (table.config.out.empty()) {
        std::cout << (format == "csv" ? hpdecode::to_csv(table) : hpdecode::to_json_document(table).dump(2) + "\n");
        return;
    }
    const fs::path path = fs::path(table.config.out) / ("results." + format);
    hpdecode::export_table(table, format, path);
    std::fprintf(stderr, "wrote %zu records (%zu failures) to %s\n", table.records.size(), table.failures.size(),
                 path.string().c_str());
}

int execute_sweep(const SweepConfig& cfg, const std::string& format) {
    cfg.validate();
    if (!cfg.out.empty()) {
        fs::create_directories(cfg.out);
        hpdecode::detail::write_atomically(fs::path(cfg.out) / "config.json", nlohmann::json(cfg).dump(2) + "\n");
    }
    hpdecode::SweepHooks hooks;
    hooks.stop = &g_stop;
    std::signal(SIGINT, on_sigint);
    const auto table = hpdecode::run_sweep(cfg, hooks);
    write_results(table, format);
    return table.failures.empty() ? kOk : kRuntime;
}

void print_fit(const hpdecode::FitResult& fit) {
    std::printf("t,mean,std_error,count\n");
    for (const auto& p : fit.points) {
        std::printf("%g,%.6f,%.6f,%zu\n", p.t, p.mean, p.std_error, p.count);
    }
    if (fit.degenerate) {
        std::printf("fit: degenerate (constant data) b=%.6f\n", fit.b);
        return;
    }
    std::printf("fit: a=%.6f alpha=%.6f b=%.6f a+b=%.6f residual=%.3g iterations=%d\n", fit.a, fit.alpha, fit.b,
                fit.a + fit.b, fit.residual_norm, fit.iterations);
}

hpdecode::DenseUnitary sample_unitary(const hpdecode::Partition& part, std::size_t t, std::size_t gpl,
                                      hpdecode::Rng& rng) {
    if (gpl == 0) gpl = hpdecode::default_gates_per_layer(part.n);
    return hpdecode::synthesize_dense(hpdecode::sample_doped_circuit(part.n, t, gpl, rng));
}

hpdecode::Pauli nonidentity_pauli(std::size_t n, const hpdecode::Region& r, hpdecode::Rng& rng) {
    for (;;) {
        auto p = hpdecode::random_pauli(n, r, rng);
        if (!p.is_identity()) return p;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoder learning for t-doped Clifford scramblers"};
    app.require_subcommand(1);

    SweepFlags sweep_flags;
    std::string sweep_format = "csv";
    auto* sweep = app.add_subcommand("sweep", "train decoders over a doping sweep");
    sweep_flags.add_to(*sweep);
    sweep->add_option("--format", sweep_format, "results format")->check(CLI::IsMember({"csv", "json"}));

    std::string resume_dir, resume_format = "csv";
    std::optional<std::size_t> resume_jobs;
    auto* resume = app.add_subcommand("resume", "continue an interrupted sweep from its output directory");
    resume->add_option("--out", resume_dir, "sweep output directory")->required()->check(CLI::ExistingDirectory);
    resume->add_option("--jobs", resume_jobs, "worker threads");
    resume->add_option("--format", resume_format, "results format")->check(CLI::IsMember({"csv", "json"}));

    std::string fit_input, fit_plot_dir;
    bool fit_teleport = false;
    auto* fit = app.add_subcommand("fit", "fit a exp(-alpha t) + b to per-t mean fidelity");
    fit->add_option("input", fit_input, "results.csv or results.json")->required()->check(CLI::ExistingFile);
    fit->add_flag("--teleport", fit_teleport, "fit the teleportation fidelity column");
    fit->add_option("--plot-dir", fit_plot_dir, "write points.csv and curve.csv here");

    std::string metric = "omega";
    std::size_t m_n = 6, m_na = 1, m_nc = 1, m_t = 0, m_samples = 20, m_gpl = 0, m_k = 500, m_jobs = 1;
    std::uint64_t m_seed = 1;
    auto* metrics = app.add_subcommand("metrics", "OTOC averages, OTOC identities and ensemble fluctuations");
    metrics->add_option("kind", metric, "omega | otoc | delta-omega | renyi")
        ->check(CLI::IsMember({"omega", "otoc", "delta-omega", "renyi"}));
    metrics->add_option("--n", m_n, "total qubits");
    metrics->add_option("--na", m_na, "qubits in A");
    metrics->add_option("--nc", m_nc, "qubits in C");
    metrics->add_option("--t", m_t, "doping level");
    metrics->add_option("--samples", m_samples, "unitaries (ensemble size for delta-omega)");
    metrics->add_option("--gates-per-layer", m_gpl, "Clifford gates per layer (0: 3 n^2)");
    metrics->add_option("--k", m_k, "Pauli samples for the sampled eight-point OTOC");
    metrics->add_option("--seed", m_seed, "seed");
    metrics->add_option("--jobs", m_jobs, "worker threads for delta-omega");

    std::size_t oc_pairs = 200;
    std::uint64_t oc_seed = 1;
    double oc_tol = 1e-9;
    auto* oracle = app.add_subcommand("oracle-check", "compare closed-form fidelities with the statevector decoder");
    oracle->add_option("--pairs", oc_pairs, "random (U, V) pairs");
    oracle->add_option("--seed", oc_seed, "seed");
    oracle->add_option("--tol", oc_tol, "allowed absolute difference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sweep) {
            SweepConfig cfg;
            try {
                cfg = sweep_flags.resolve();
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(std::string("config file: ") + e.what());
            }
            return execute_sweep(cfg, sweep_format);
        }
        if (*resume) {
            const fs::path cfg_path = fs::path(resume_dir) / "config.json";
            if (!fs::exists(cfg_path)) {
                throw UsageError("no config.json in " + resume_dir);
            }
            SweepConfig cfg;
            hpdecode::from_json(nlohmann::json::parse(hpdecode::read_file(cfg_path)), cfg);
            cfg.out = resume_dir;
            if (resume_jobs) cfg.jobs = *resume_jobs;
            return execute_sweep(cfg, resume_format);
        }
        if (*fit) {
            const auto table = hpdecode::import_table(fit_input);
            const auto points = hpdecode::aggregate(table, fit_teleport);
            const auto result = hpdecode::fit_exponential(points);
            print_fit(result);
            if (!fit_plot_dir.empty()) {
                fs::create_directories(fit_plot_dir);
                hpdecode::emit_plot_data(points, result, fs::path(fit_plot_dir) / "points.csv",
                                         fs::path(fit_plot_dir) / "curve.csv");
            }
            return kOk;
        }
        if (*metrics) {
            hpdecode::Partition part(m_n, m_na, m_nc);
            hpdecode::Rng rng(hpdecode::derive_seed(m_seed, m_t));
            if (metric == "delta-omega") {
                const auto est = hpdecode::delta_omega_estimate(m_t, part, m_samples, m_seed, m_gpl, m_jobs);
                std::printf("t=%zu ensemble=%zu mean_omega=%.10g (+- %.3g) delta_omega=%.6g (+- %.3g)\n", est.t,
                            est.ensemble_size, est.mean, est.mean_stderr, est.variance, est.variance_stderr);
                return kOk;
            }
            std::printf("plateau=%.10g\n", part.scrambling_plateau());
            for (std::size_t s = 0; s < m_samples; ++s) {
                const auto u = sample_unitary(part, m_t, m_gpl, rng);
                if (metric == "omega") {
                    const double om = hpdecode::omega_exact(u, part);
                    std::printf("%zu omega=%.10g residual=%.3g info_bound=%.6f\n", s, om,
                                hpdecode::scrambling_residual(om, part), hpdecode::mutual_info_bound(om, part.n_a));
                } else if (metric == "renyi") {
                    const double om = hpdecode::omega_exact(u, part);
                    const double s2 = hpdecode::renyi2_entropy(hpdecode::build_hp_state(u, part),
                                                               hpdecode::hp_rc_region(part));
                    const double bridge =
                        -std::log2(static_cast<double>(part.d_a()) / static_cast<double>(part.d_c()) * om);
                    std::printf("%zu s2=%.10g from_omega=%.10g\n", s, s2, bridge);
                } else {
                    const auto pa = nonidentity_pauli(part.n, part.a(), rng);
                    const auto pd = nonidentity_pauli(part.n, part.d_region(), rng);
                    const double o4 = hpdecode::otoc4(u, pa, pd);
                    const auto o8 = hpdecode::otoc8(u, pa, pd, hpdecode::Otoc8Mode::sampled, m_k, &rng);
                    std::printf("%zu otoc4=%.10g otoc4_sq=%.10g otoc8=%.10g (+- %.3g)\n", s, o4, o4 * o4, o8.value,
                                o8.std_error);
                }
            }
            return kOk;
        }
        if (*oracle) {
            const auto rep = hpdecode::run_oracle_suite(oc_pairs, oc_seed);
            std::printf("pairs=%zu degenerate=%zu\n", rep.pairs, rep.degenerate);
            std::printf("max |fidelity - oracle|          %.3g\n", rep.max_fidelity_diff);
            std::printf("max |teleport - oracle|          %.3g\n", rep.max_teleport_diff);
            std::printf("max |F(U,U) d_A^2 Omega - 1|     %.3g\n", rep.max_ideal_identity_diff);
            std::printf("max |P_out F - d_A^-2|           %.3g\n", rep.max_p_out_identity_diff);
            const bool ok = rep.ok(oc_tol);
            std::printf("%s (tol %.1e)\n", ok ? "OK" : "MISMATCH", oc_tol);
            return ok ? kOk : kRuntime;
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
    return kUsage;
}
