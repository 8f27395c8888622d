#pragma once

// Command implementations behind the `qwalk` executable. Argument parsing
// lives in tools/; everything here takes a filled RunConfig and writes to the
// given streams so it can be driven from tests.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/harness.hpp"
#include "qwalk/io.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/routing.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk::cli {

enum class Command { compile, run, route, validate, count_paths, sweep };

struct RunConfig {
    Command command = Command::compile;

    int d = 3;
    int n = 0;
    std::optional<int> n_opt;  // route: common n, chosen automatically when absent
    Position p = 0;
    PositionVec targets;

    std::optional<std::string> input;       // inline JSON amplitude list
    std::optional<std::string> input_file;  // file holding the same
    bool ghz = false;                       // route: sum_i |i..i> / sqrt(d)
    std::optional<std::uint64_t> seed;

    std::optional<std::string> schedule_path;
    std::optional<std::string> plan_out;
    std::optional<std::string> out_path;
    bool trace = false;

    int trials = 20;
    bool enumerate = true;

    SweepConfig sweep;
};

// --seed wins, then QWALK_SEED, then 0.
inline std::uint64_t resolve_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("QWALK_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw FormatError(std::string("QWALK_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

namespace detail {

// Explicit amplitudes if given, otherwise a seeded random unit vector.
inline std::vector<Complex> input_amplitudes(const RunConfig& cfg, std::size_t size) {
    std::optional<io::Json> j;
    if (cfg.input) j = io::parse(*cfg.input);
    if (cfg.input_file) j = io::read_file(*cfg.input_file);
    if (j) {
        auto v = io::coin_vector_from_json(*j);
        if (v.size() != size) {
            throw DimensionError("input has " + std::to_string(v.size()) + " amplitudes, expected " +
                                 std::to_string(size));
        }
        return v;
    }
    Rng rng(resolve_seed(cfg));
    return random_unit_vector(size, rng);
}

inline io::Json amplitudes_json(const std::vector<Complex>& v) {
    io::Json arr = io::Json::array();
    for (const auto& a : v) arr.push_back(io::Json::array({a.real(), a.imag()}));
    return arr;
}

// Writes to the --out file when given, otherwise to `out`.
class Sink {
public:
    Sink(const RunConfig& cfg, std::ostream& out) : out_(&out) {
        if (cfg.out_path) {
            file_.open(*cfg.out_path);
            if (!file_) throw Error("cannot write " + *cfg.out_path);
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }
    void pretty(const io::Json& j) { *out_ << j.dump(2) << '\n'; }
    void line(const io::Json& j) { *out_ << j.dump() << '\n'; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

inline int cmd_compile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto checked = compile_checked(cfg.d, cfg.n, cfg.p, 0, 0);
    if (!checked.report.pass) {
        err << "warning: closed-form schedule for d=" << cfg.d << ", n=" << cfg.n << ", p=" << cfg.p
            << " fails validation (min fidelity " << checked.report.min_fidelity
            << "); use the oracle schedule from `sweep`\n";
    }
    Sink sink(cfg, out);
    sink.pretty(io::to_json(checked.schedule));
    return 0;
}

inline Schedule load_schedule(const RunConfig& cfg) {
    if (!cfg.schedule_path) throw FormatError("--schedule is required");
    return io::schedule_from_json(io::read_file(*cfg.schedule_path));
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const auto schedule = load_schedule(cfg);
    const auto input = input_amplitudes(cfg, static_cast<std::size_t>(schedule.dim()));
    Sink sink(cfg, out);

    auto state = new_localized(schedule.dim(), 0, input);
    if (cfg.trace) sink.line(io::to_json(state));
    for (int t = 0; t < schedule.steps(); ++t) {
        state = step(state, schedule);
        if (cfg.trace) sink.line(io::to_json(state));
    }
    const double f = fidelity(state, new_localized(schedule.dim(), schedule.target(), input));

    io::Json summary;
    summary["d"] = schedule.dim();
    summary["n"] = schedule.steps();
    summary["p"] = schedule.target();
    summary["input"] = amplitudes_json(input);
    summary["fidelity"] = f;
    summary["final"] = io::to_json(state);
    if (cfg.trace) {
        io::Json wrapped;
        wrapped["summary"] = std::move(summary);
        sink.line(wrapped);
    } else {
        sink.pretty(summary);
    }
    return 0;
}

inline std::vector<Complex> ghz_state(int d, int m) {
    std::vector<Complex> v(coin_space_size(d, m));
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        const std::vector<int> diag(static_cast<std::size_t>(m), i);
        v[joint_index(diag, d)] = a;
    }
    return v;
}

inline int cmd_route(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.targets.empty()) throw FormatError("--targets is required");
    const int m = static_cast<int>(cfg.targets.size());
    const auto plan = plan_route(cfg.d, cfg.targets, cfg.n_opt);
    if (cfg.plan_out) io::write_file(*cfg.plan_out, io::to_json(plan));

    const auto input = cfg.ghz ? ghz_state(cfg.d, m) : input_amplitudes(cfg, coin_space_size(cfg.d, m));
    Sink sink(cfg, out);
    RouteObserver observer;
    if (cfg.trace) observer = [&](const MultiWalkerState& s) { sink.line(io::to_json(s)); };
    const auto final_state = route(plan, input, observer);

    io::Json summary;
    summary["d"] = plan.dim();
    summary["n"] = plan.steps();
    summary["targets"] = plan.targets();
    summary["special_settings"] = plan.special_settings();
    summary["input"] = amplitudes_json(input);
    summary["fidelity"] = entanglement_check(final_state, plan.targets(), input);
    io::Json purity_in = io::Json::array();
    io::Json purity_out = io::Json::array();
    const auto delivered = final_state.coin_state_at(plan.targets());
    for (int axis = 0; axis < m; ++axis) {
        purity_in.push_back(reduced_purity(input, cfg.d, m, axis));
        purity_out.push_back(reduced_purity(delivered, cfg.d, m, axis));
    }
    summary["reduced_purity_in"] = std::move(purity_in);
    summary["reduced_purity_out"] = std::move(purity_out);
    if (cfg.trace) {
        io::Json wrapped;
        wrapped["summary"] = std::move(summary);
        sink.line(wrapped);
    } else {
        sink.pretty(summary);
    }
    return 0;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const auto schedule = load_schedule(cfg);
    const auto report = validate_schedule(schedule, cfg.trials, resolve_seed(cfg));
    auto j = io::to_json(report);
    const auto divergent = first_divergent_step(schedule);
    j["first_divergent_step"] = divergent ? io::Json(*divergent) : io::Json(nullptr);
    Sink sink(cfg, out);
    sink.pretty(j);
    return report.pass ? 0 : 1;
}

inline int cmd_count_paths(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    io::Json j;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    const auto closed = count_paths_closed(cfg.n, cfg.p);
    j["closed"] = closed;
    if (cfg.enumerate) {
        const auto listed = count_paths_enum(cfg.n, cfg.p);
        j["enumerated"] = listed;
        j["agree"] = listed == closed;
    }
    Sink sink(cfg, out);
    sink.pretty(j);
    return 0;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto sc = cfg.sweep;
    sc.seed = resolve_seed(cfg);
    const auto report = sweep(sc);
    Sink sink(cfg, out);
    sink.pretty(io::to_json(report));
    if (!report.oracle_failures.empty()) {
        err << "oracle failed on " << report.oracle_failures.size() << " tuple(s)\n";
        return 1;
    }
    return 0;
}

}  // namespace detail

// Runs one command; library errors become exit code 2 with the message on
// `err`.
inline int run_command(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        switch (cfg.command) {
            case Command::compile: return detail::cmd_compile(cfg, out, err);
            case Command::run: return detail::cmd_run(cfg, out, err);
            case Command::route: return detail::cmd_route(cfg, out, err);
            case Command::validate: return detail::cmd_validate(cfg, out, err);
            case Command::count_paths: return detail::cmd_count_paths(cfg, out, err);
            case Command::sweep: return detail::cmd_sweep(cfg, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace qwalk::cli
