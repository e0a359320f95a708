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

// Sweeps over doping t and realizations. Every run is a pure function of
// (config, master seed, t, realization index):
//
//   run seed          derive_seed(master, t, index)
//   U circuit stream  derive_seed(run seed, 1)
//   training stream   derive_seed(run seed, 2)
//   psi stream        derive_seed(run seed, 3)
//
// Completed runs are appended to a JSONL journal so an interrupted sweep can
// be resumed; long runs also write chain checkpoints.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hpdecode/anneal.hpp"
#include "hpdecode/circuit.hpp"
#include "hpdecode/fidelity.hpp"
#include "hpdecode/fit.hpp"
#include "hpdecode/partition.hpp"
#include "hpdecode/rng.hpp"

namespace hpdecode {

struct SweepConfig {
    std::size_t n = 8;
    std::size_t n_a = 2;
    std::size_t n_c = 1;
    std::size_t t_min = 0;
    std::size_t t_max = 8;
    std::size_t t_step = 2;
    std::size_t realizations = 30;
    /// Zero selects default_gates_per_layer(n).
    std::size_t gates_per_layer = 0;
    AnnealConfig anneal;
    /// T budget of the doped ansatz; unset means "same as U's t".
    std::optional<std::size_t> doped_budget;
    bool teleport = false;
    /// "haar" or "basis:<k>".
    std::string psi = "haar";
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::string out;
    std::size_t checkpoint_every = 0;
    bool timing = false;

    static SweepConfig desk() { return {}; }

    static SweepConfig paper() {
        SweepConfig c;
        c.n = 10;
        c.t_max = 12;
        c.t_step = 1;
        c.realizations = 200;
        return c;
    }

    static SweepConfig profile(const std::string& name) {
        if (name == "desk") return desk();
        if (name == "paper") return paper();
        throw std::invalid_argument("unknown profile '" + name + "' (expected paper or desk)");
    }

    Partition partition() const { return Partition(n, n_a, n_c); }

    std::vector<std::size_t> t_values() const {
        std::vector<std::size_t> ts;
        for (std::size_t t = t_min; t <= t_max; t += t_step) {
            ts.push_back(t);
        }
        return ts;
    }

    void validate() const {
        partition();
        if (t_min > t_max || t_step == 0) {
            throw std::invalid_argument("SweepConfig: empty t range");
        }
        if (realizations == 0) {
            throw std::invalid_argument("SweepConfig: realizations must be at least 1");
        }
        if (teleport && n_a == 0) {
            throw std::invalid_argument("SweepConfig: teleportation needs n_a >= 1");
        }
        anneal.validate();
        psi_state(0);
    }

    /// The teleported state for a run, from the psi stream.
    StateVector psi_state(std::uint64_t run_seed) const {
        if (psi == "haar") {
            Rng rng(derive_seed(run_seed, 3));
            return haar_state(n_a, rng);
        }
        if (psi.rfind("basis:", 0) == 0) {
            const std::uint64_t k = std::stoull(psi.substr(6));
            if (k >= qubit_dim(n_a)) {
                throw std::invalid_argument("SweepConfig: basis state index out of range");
            }
            return StateVector::basis(n_a, k);
        }
        throw std::invalid_argument("SweepConfig: psi must be 'haar' or 'basis:<k>'");
    }

    /// Fields that determine the results; jobs, paths and timing do not.
    nlohmann::json identity_json() const;
};

inline void to_json(nlohmann::json& j, const SweepConfig& c) {
    j = nlohmann::json{{"n", c.n},
                       {"n_a", c.n_a},
                       {"n_c", c.n_c},
                       {"t_min", c.t_min},
                       {"t_max", c.t_max},
                       {"t_step", c.t_step},
                       {"realizations", c.realizations},
                       {"gates_per_layer", c.gates_per_layer},
                       {"anneal", c.anneal},
                       {"doped_budget", c.doped_budget ? nlohmann::json(*c.doped_budget) : nlohmann::json(nullptr)},
                       {"teleport", c.teleport},
                       {"psi", c.psi},
                       {"seed", c.seed},
                       {"jobs", c.jobs},
                       {"out", c.out},
                       {"checkpoint_every", c.checkpoint_every},
                       {"timing", c.timing}};
}

/// Missing keys keep the values already in `c`, so a file can be layered over a profile.
inline void from_json(const nlohmann::json& j, SweepConfig& c) {
    static const std::vector<std::string> known = {"n",        "n_a",  "n_c",   "t_min", "t_max",
                                                   "t_step",   "realizations",  "gates_per_layer",
                                                   "anneal",   "doped_budget",  "teleport",
                                                   "psi",      "seed", "jobs",  "out",   "checkpoint_every",
                                                   "timing",   "profile"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("sweep config: unknown key '" + key + "'");
        }
    }
    c.n = j.value("n", c.n);
    c.n_a = j.value("n_a", c.n_a);
    c.n_c = j.value("n_c", c.n_c);
    c.t_min = j.value("t_min", c.t_min);
    c.t_max = j.value("t_max", c.t_max);
    c.t_step = j.value("t_step", c.t_step);
    c.realizations = j.value("realizations", c.realizations);
    c.gates_per_layer = j.value("gates_per_layer", c.gates_per_layer);
    if (j.contains("anneal")) {
        nlohmann::json merged = c.anneal;
        merged.update(j.at("anneal"));
        c.anneal = merged.get<AnnealConfig>();
    }
    if (j.contains("doped_budget")) {
        c.doped_budget = j.at("doped_budget").is_null() ? std::nullopt
                                                         : std::optional<std::size_t>(j.at("doped_budget").get<std::size_t>());
    }
    c.teleport = j.value("teleport", c.teleport);
    c.psi = j.value("psi", c.psi);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    c.out = j.value("out", c.out);
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    c.timing = j.value("timing", c.timing);
}

inline nlohmann::json SweepConfig::identity_json() const {
    nlohmann::json j = *this;
    j.erase("jobs");
    j.erase("out");
    j.erase("checkpoint_every");
    j.erase("timing");
    return j;
}

struct RunRecord {
    std::string run_id;
    std::uint64_t seed = 0;
    std::size_t t = 0;
    std::size_t index = 0;
    std::size_t n = 0;
    std::size_t n_a = 0;
    std::size_t n_c = 0;
    std::size_t steps = 0;
    std::size_t accepted = 0;
    double final_fidelity = 0.0;
    std::optional<double> teleport_fidelity;
    double overlap_uv = 0.0;
    std::optional<double> wall_s;

    bool operator==(const RunRecord&) const = default;
};

inline std::string make_run_id(std::size_t t, std::size_t index) {
    return "t" + std::to_string(t) + "-r" + std::to_string(index);
}

inline void to_json(nlohmann::json& j, const RunRecord& r) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j = nlohmann::json{{"run_id", r.run_id},
                       {"seed", r.seed},
                       {"t", r.t},
                       {"index", r.index},
                       {"n", r.n},
                       {"n_a", r.n_a},
                       {"n_c", r.n_c},
                       {"steps", r.steps},
                       {"accepted", r.accepted},
                       {"final_fidelity", r.final_fidelity},
                       {"teleport_fidelity", opt(r.teleport_fidelity)},
                       {"overlap_uv", r.overlap_uv},
                       {"wall_s", opt(r.wall_s)}};
}

inline void from_json(const nlohmann::json& j, RunRecord& r) {
    auto opt = [&j](const char* key) {
        return j.at(key).is_null() ? std::nullopt : std::optional<double>(j.at(key).get<double>());
    };
    r.run_id = j.at("run_id").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.t = j.at("t").get<std::size_t>();
    r.index = j.at("index").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.n_a = j.at("n_a").get<std::size_t>();
    r.n_c = j.at("n_c").get<std::size_t>();
    r.steps = j.at("steps").get<std::size_t>();
    r.accepted = j.at("accepted").get<std::size_t>();
    r.final_fidelity = j.at("final_fidelity").get<double>();
    r.teleport_fidelity = opt("teleport_fidelity");
    r.overlap_uv = j.at("overlap_uv").get<double>();
    r.wall_s = opt("wall_s");
}

struct RunFailure {
    std::string run_id;
    std::size_t t = 0;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string error;
};

struct RunTable {
    SweepConfig config;
    std::vector<RunRecord> records;
    std::vector<RunFailure> failures;

    void canonicalize() {
        auto key = [](const auto& r) { return std::pair(r.t, r.index); };
        std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
        std::sort(failures.begin(), failures.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    }
};

/// U circuit of a run.
inline Circuit sample_run_unitary(const SweepConfig& cfg, std::uint64_t run_seed, std::size_t t) {
    Rng rng(derive_seed(run_seed, 1));
    const std::size_t gpl = cfg.gates_per_layer == 0 ? default_gates_per_layer(cfg.n) : cfg.gates_per_layer;
    return sample_doped_circuit(cfg.n, t, gpl, rng);
}

/// Anneal config of a run: training stream and the doped-ansatz budget.
inline AnnealConfig run_anneal_config(const SweepConfig& cfg, std::uint64_t run_seed, std::size_t t) {
    AnnealConfig a = cfg.anneal;
    a.seed = derive_seed(run_seed, 2);
    if (a.ansatz == Ansatz::doped) {
        a.t_budget = cfg.doped_budget.value_or(t);
    }
    return a;
}

/// Control points for callers that need to stop a sweep (signals, tests).
struct SweepHooks {
    /// After each completed record; return false to stop starting new runs.
    std::function<bool(const RunRecord&)> after_record;
    /// At each chain checkpoint; return false to interrupt the run there.
    std::function<bool(std::size_t t, std::size_t index, std::size_t step)> at_checkpoint;
    /// Polled between runs and at checkpoints.
    const std::atomic<bool>* stop = nullptr;
};

class SweepInterrupted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp);
        }
        out << text;
        if (!out.flush()) {
            throw std::runtime_error("write failed for " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

class Journal {
  public:
    static constexpr const char* kFormat = "hpdecode-journal-1";

    explicit Journal(const std::filesystem::path& dir) : path_(dir / "journal.jsonl") {}

    const std::filesystem::path& path() const { return path_; }

    /// Loads finished runs; creates the journal if absent. Throws when the
    /// journal belongs to a different sweep.
    void open(const SweepConfig& cfg, RunTable& table) {
        const nlohmann::json id = cfg.identity_json();
        if (std::filesystem::exists(path_)) {
            std::ifstream in(path_);
            std::string line;
            bool header = true;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) {
                    continue;
                }
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(line);
                } catch (const nlohmann::json::exception&) {
                    // A torn final line from a killed process is dropped.
                    if (in.peek() == std::char_traits<char>::eof()) {
                        break;
                    }
                    throw std::runtime_error(path_.string() + ":" + std::to_string(line_no) + ": corrupt journal line");
                }
                if (header) {
                    if (j.value("format", "") != kFormat) {
                        throw std::runtime_error(path_.string() + ": not a sweep journal");
                    }
                    if (j.at("config") != id) {
                        throw std::runtime_error(path_.string() + ": journal was written by a different sweep config");
                    }
                    header = false;
                    continue;
                }
                if (j.contains("error")) {
                    table.failures.push_back({j.at("run_id"), j.at("t"), j.at("index"), j.at("seed"), j.at("error")});
                } else {
                    table.records.push_back(j.get<RunRecord>());
                }
            }
            if (!header) {
                rewrite_clean(id, table);
                return;
            }
        }
        std::ofstream out(path_, std::ios::trunc);
        out << nlohmann::json{{"format", kFormat}, {"config", id}}.dump() << '\n';
    }

    void append(const nlohmann::json& j) {
        std::lock_guard<std::mutex> lock(mu_);
        std::ofstream out(path_, std::ios::app);
        out << j.dump() << '\n';
        out.flush();
        if (!out) {
            throw std::runtime_error("cannot append to " + path_.string());
        }
    }

  private:
    // Drops any torn tail by rewriting the parsed content.
    void rewrite_clean(const nlohmann::json& id, const RunTable& table) {
        std::ostringstream text;
        text << nlohmann::json{{"format", kFormat}, {"config", id}}.dump() << '\n';
        for (const auto& r : table.records) {
            text << nlohmann::json(r).dump() << '\n';
        }
        for (const auto& f : table.failures) {
            text << failure_json(f).dump() << '\n';
        }
        write_atomically(path_, text.str());
    }

  public:
    static nlohmann::json failure_json(const RunFailure& f) {
        return {{"run_id", f.run_id}, {"t", f.t}, {"index", f.index}, {"seed", f.seed}, {"error", f.error}};
    }

  private:
    std::filesystem::path path_;
    std::mutex mu_;
};

}  // namespace detail

/// Runs one realization. `checkpoint_dir`, when non-empty, receives chain
/// snapshots and is consulted to resume a partially finished chain.
inline RunRecord run_single(const SweepConfig& cfg, std::size_t t, std::size_t index,
                            const std::filesystem::path& checkpoint_dir = {}, const SweepHooks& hooks = {}) {
    const Partition part = cfg.partition();
    const std::uint64_t run_seed = derive_seed(cfg.seed, t, index);
    const std::string id = make_run_id(t, index);
    const Circuit uc = sample_run_unitary(cfg, run_seed, t);
    const AnnealConfig acfg = run_anneal_config(cfg, run_seed, t);
    const auto start = std::chrono::steady_clock::now();

    std::filesystem::path snap_path;
    CheckpointHook hook;
    if (!checkpoint_dir.empty() && cfg.checkpoint_every > 0) {
        snap_path = checkpoint_dir / (id + ".json");
        hook.every = cfg.checkpoint_every;
        hook.fn = [&](const AnnealState& s, const Rng& rng) {
            detail::write_atomically(snap_path, checkpoint(s, rng).dump());
            if (hooks.stop && hooks.stop->load()) {
                return false;
            }
            return !hooks.at_checkpoint || hooks.at_checkpoint(t, index, s.step());
        };
    }
    TrainResult res;
    if (!snap_path.empty() && std::filesystem::exists(snap_path)) {
        std::ifstream in(snap_path);
        const auto snap = nlohmann::json::parse(in);
        if (snap.at("u_circuit").get<std::string>() != uc.str() || snap.at("config").get<AnnealConfig>() != acfg) {
            throw std::runtime_error("checkpoint " + snap_path.string() + " does not belong to this run");
        }
        res = resume_train(snap, hook);
    } else {
        res = train(uc, part, acfg, hook);
    }

    RunRecord r;
    r.run_id = id;
    r.seed = run_seed;
    r.t = t;
    r.index = index;
    r.n = cfg.n;
    r.n_a = cfg.n_a;
    r.n_c = cfg.n_c;
    r.steps = res.steps;
    r.accepted = res.accepted;
    r.final_fidelity = res.final_fidelity;
    r.overlap_uv = res.overlap_uv;
    if (cfg.teleport) {
        r.teleport_fidelity =
            teleport_fidelity(synthesize_dense(uc), synthesize_dense(res.v), cfg.psi_state(run_seed), part);
    }
    if (cfg.timing) {
        r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (!snap_path.empty()) {
        std::filesystem::remove(snap_path);
    }
    return r;
}

/// Runs every (t, realization) not already in the journal under cfg.out.
/// Workers pull runs in canonical order; the table is canonicalized at the end.
inline RunTable run_sweep(const SweepConfig& cfg, const SweepHooks& hooks = {}) {
    cfg.validate();
    RunTable table;
    table.config = cfg;
    std::optional<detail::Journal> journal;
    std::filesystem::path ckpt_dir;
    if (!cfg.out.empty()) {
        std::filesystem::create_directories(cfg.out);
        journal.emplace(cfg.out);
        journal->open(cfg, table);
        ckpt_dir = std::filesystem::path(cfg.out) / "checkpoints";
        std::filesystem::create_directories(ckpt_dir);
    }
    std::map<std::pair<std::size_t, std::size_t>, bool> done;
    for (const auto& r : table.records) done[{r.t, r.index}] = true;
    for (const auto& f : table.failures) done[{f.t, f.index}] = true;
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t t : cfg.t_values()) {
        for (std::size_t k = 0; k < cfg.realizations; ++k) {
            if (!done.count({t, k})) {
                tasks.emplace_back(t, k);
            }
        }
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> halted{false};
    std::mutex mu;
    std::exception_ptr fatal;
    auto stop_requested = [&] { return halted.load() || (hooks.stop && hooks.stop->load()); };

    auto worker = [&] {
        while (!stop_requested()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) {
                return;
            }
            const auto [t, k] = tasks[i];
            try {
                RunRecord r = run_single(cfg, t, k, ckpt_dir, hooks);
                std::lock_guard<std::mutex> lock(mu);
                if (journal) {
                    journal->append(nlohmann::json(r));
                }
                table.records.push_back(r);
                if (hooks.after_record && !hooks.after_record(r)) {
                    halted = true;
                }
            } catch (const TrainInterrupted&) {
                halted = true;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                RunFailure f{make_run_id(t, k), t, k, derive_seed(cfg.seed, t, k), e.what()};
                try {
                    if (journal) {
                        journal->append(detail::Journal::failure_json(f));
                    }
                } catch (...) {
                    fatal = std::current_exception();
                    halted = true;
                }
                table.failures.push_back(f);
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, std::max<std::size_t>(1, tasks.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (fatal) {
        std::rethrow_exception(fatal);
    }
    table.canonicalize();
    if (!cfg.out.empty()) {
        std::ofstream fails(std::filesystem::path(cfg.out) / "failures.jsonl", std::ios::trunc);
        for (const auto& f : table.failures) {
            fails << detail::Journal::failure_json(f).dump() << '\n';
        }
    }
    if (table.records.size() + table.failures.size() < cfg.t_values().size() * cfg.realizations) {
        throw SweepInterrupted("sweep interrupted after " + std::to_string(table.records.size()) +
                               " runs; rerun with the same config and output directory to resume");
    }
    return table;
}

inline constexpr const char* kCsvHeader =
    "run_id,seed,t,n,n_a,n_c,steps,accepted,final_fidelity,teleport_fidelity,overlap_uv,wall_s";

inline std::string to_csv(const RunTable& table) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : table.records) {
        out << r.run_id << ',' << r.seed << ',' << r.t << ',' << r.n << ',' << r.n_a << ',' << r.n_c << ','
            << r.steps << ',' << r.accepted << ',' << detail::format_double(r.final_fidelity) << ','
            << (r.teleport_fidelity ? detail::format_double(*r.teleport_fidelity) : "") << ','
            << detail::format_double(r.overlap_uv) << ',' << (r.wall_s ? detail::format_double(*r.wall_s) : "")
            << '\n';
    }
    return out.str();
}

inline nlohmann::json to_json_document(const RunTable& table) {
    nlohmann::json j;
    j["format"] = "hpdecode-runs-1";
    j["config"] = table.config;
    j["records"] = table.records;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : table.failures) {
        j["failures"].push_back(detail::Journal::failure_json(f));
    }
    return j;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

inline std::size_t parse_index_from_id(const std::string& id) {
    const auto pos = id.find("-r");
    if (pos == std::string::npos) {
        throw std::runtime_error("bad run_id '" + id + "'");
    }
    return std::stoull(id.substr(pos + 2));
}

}  // namespace detail

/// Parses the CSV written by to_csv. The config is not part of the CSV.
inline RunTable from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("CSV header does not match the run schema");
    }
    RunTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = detail::split_csv_line(line);
        if (f.size() != 12) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected 12 fields");
        }
        try {
            RunRecord r;
            r.run_id = f[0];
            r.seed = std::stoull(f[1]);
            r.t = std::stoull(f[2]);
            r.index = detail::parse_index_from_id(f[0]);
            r.n = std::stoull(f[3]);
            r.n_a = std::stoull(f[4]);
            r.n_c = std::stoull(f[5]);
            r.steps = std::stoull(f[6]);
            r.accepted = std::stoull(f[7]);
            r.final_fidelity = std::stod(f[8]);
            if (!f[9].empty()) r.teleport_fidelity = std::stod(f[9]);
            r.overlap_uv = std::stod(f[10]);
            if (!f[11].empty()) r.wall_s = std::stod(f[11]);
            table.records.push_back(r);
        } catch (const std::logic_error&) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return table;
}

inline RunTable from_json_document(const nlohmann::json& j) {
    if (j.value("format", "") != "hpdecode-runs-1") {
        throw std::runtime_error("not a run table document");
    }
    RunTable table;
    table.config = j.at("config").get<SweepConfig>();
    table.records = j.at("records").get<std::vector<RunRecord>>();
    for (const auto& f : j.value("failures", nlohmann::json::array())) {
        table.failures.push_back({f.at("run_id"), f.at("t"), f.at("index"), f.at("seed"), f.at("error")});
    }
    return table;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Writes the table as csv or json.
inline void export_table(const RunTable& table, const std::string& format, const std::filesystem::path& path) {
    if (table.records.empty()) {
        throw std::invalid_argument("export_table: no records");
    }
    if (format == "csv") {
        detail::write_atomically(path, to_csv(table));
    } else if (format == "json") {
        detail::write_atomically(path, to_json_document(table).dump(2) + "\n");
    } else {
        throw std::invalid_argument("unknown format '" + format + "' (expected csv or json)");
    }
}

/// Reads a table written by export_table; the format follows the extension.
inline RunTable import_table(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    if (path.extension() == ".json") {
        return from_json_document(nlohmann::json::parse(text));
    }
    return from_csv(text);
}

/// Per-t mean and standard error of the final fidelity (or the teleportation fidelity).
inline std::vector<FitPoint> aggregate(const RunTable& table, bool teleport = false) {
    std::map<std::size_t, std::vector<double>> by_t;
    for (const auto& r : table.records) {
        if (teleport) {
            if (r.teleport_fidelity) by_t[r.t].push_back(*r.teleport_fidelity);
        } else {
            by_t[r.t].push_back(r.final_fidelity);
        }
    }
    std::vector<FitPoint> pts;
    for (const auto& [t, values] : by_t) {
        const Summary s = summarize(values);
        pts.push_back({static_cast<double>(t), s.mean, s.std_error, s.count});
    }
    return pts;
}

/// Points file (t, mean, std_error, count) and a fitted-curve file with
/// `samples` evenly spaced points over the t range.
inline void emit_plot_data(const std::vector<FitPoint>& points, const FitResult& fit,
                           const std::filesystem::path& points_path, const std::filesystem::path& curve_path,
                           std::size_t samples = 200) {
    if (points.empty()) {
        throw std::invalid_argument("emit_plot_data: no points");
    }
    std::ostringstream p;
    p << "t,mean_fidelity,std_error,count\n";
    for (const auto& pt : points) {
        p << detail::format_double(pt.t) << ',' << detail::format_double(pt.mean) << ','
          << detail::format_double(pt.std_error) << ',' << pt.count << '\n';
    }
    detail::write_atomically(points_path, p.str());
    const double lo = points.front().t, hi = points.back().t;
    std::ostringstream c;
    c << "t,fit\n";
    samples = std::max<std::size_t>(samples, 2);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
        c << detail::format_double(t) << ',' << detail::format_double(fit(t)) << '\n';
    }
    detail::write_atomically(curve_path, c.str());
}

struct AuditReport {
    std::size_t checked = 0;
    double max_fidelity_diff = 0.0;
    std::vector<std::string> mismatched;
};

/// Re-derives each record from its seed and recomputes F(U, V) by the literal
/// cost enumeration. Records differing by more than `tol` are listed.
inline AuditReport audit(const SweepConfig& cfg, const std::vector<RunRecord>& records, double tol = 1e-10) {
    AuditReport rep;
    const Partition part = cfg.partition();
    for (const auto& r : records) {
        const std::uint64_t run_seed = derive_seed(cfg.seed, r.t, r.index);
        if (run_seed != r.seed) {
            rep.mismatched.push_back(r.run_id + " (seed)");
            continue;
        }
        const Circuit uc = sample_run_unitary(cfg, run_seed, r.t);
        const TrainResult res = train(uc, part, run_anneal_config(cfg, run_seed, r.t));
        const DenseUnitary u = synthesize_dense(uc);
        const DenseUnitary v = synthesize_dense(res.v);
        double f = 0.0;
        try {
            f = fidelity(u, v, part);
        } catch (const DegenerateCostError&) {
            f = 0.0;
        }
        const double diff = std::abs(f - r.final_fidelity);
        rep.max_fidelity_diff = std::max(rep.max_fidelity_diff, diff);
        ++rep.checked;
        if (diff > tol || res.steps != r.steps || res.accepted != r.accepted) {
            rep.mismatched.push_back(r.run_id);
        }
    }
    return rep;
}

}  // namespace hpdecode
