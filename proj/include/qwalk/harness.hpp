#pragma once

// Validation and sweep harness: checks compiled schedules by simulation and
// compares them with the flow-tracking oracle over a grid of (d, n, p).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

inline constexpr double kTransferTolerance = 1e-10;

using Rng = std::mt19937_64;

// Haar-like random unit vector: complex Gaussian entries, normalized.
inline std::vector<Complex> random_unit_vector(std::size_t size, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> v(size);
    double n2 = 0.0;
    do {
        for (auto& a : v) a = {gauss(rng), gauss(rng)};
        n2 = squared_norm(v);
    } while (n2 < 1e-12);
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : v) a *= scale;
    return v;
}

inline std::vector<Complex> basis_vector(int d, int c) {
    std::vector<Complex> e(static_cast<std::size_t>(d));
    e.at(static_cast<std::size_t>(c)) = 1.0;
    return e;
}

// Independent stream for one (d, n, p) so results do not depend on the order
// tuples are visited in.
inline Rng tuple_rng(std::uint64_t seed, int d, int n, Position p) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(n),
                      static_cast<std::uint32_t>(p + (1 << 20))};
    return Rng(seq);
}

struct ValidationReport {
    double min_fidelity = 1.0;
    int trials = 0;
    int basis_checks = 0;
    bool pass = true;
};

// d basis inputs always, plus `trials` random inputs drawn from `seed`.
inline ValidationReport validate_schedule(const Schedule& schedule, int trials, std::uint64_t seed) {
    if (trials < 0) throw Error("trials must be non-negative");
    ValidationReport report;
    report.trials = trials;
    for (int c = 0; c < schedule.dim(); ++c) {
        report.min_fidelity = std::min(report.min_fidelity, transfer_fidelity(schedule, basis_vector(schedule.dim(), c)));
        ++report.basis_checks;
    }
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const auto v = random_unit_vector(static_cast<std::size_t>(schedule.dim()), rng);
        report.min_fidelity = std::min(report.min_fidelity, transfer_fidelity(schedule, v));
    }
    report.pass = report.min_fidelity >= 1.0 - kTransferTolerance;
    return report;
}

// First step after which some basis input can no longer arrive at (p, own
// coin) by step n. nullopt when every basis input arrives.
inline std::optional<int> first_divergent_step(const Schedule& schedule) {
    const CoinBasis basis(schedule.dim());
    std::optional<int> first;
    for (int c0 = 0; c0 < schedule.dim(); ++c0) {
        Position x = 0;
        int coin = c0;
        for (int t = 1; t <= schedule.steps(); ++t) {
            coin = schedule.coin_at(t, x).image(coin);
            x += CoinBasis::displacement(basis.direction(coin));
            const bool unreachable = std::llabs(x - schedule.target()) > schedule.steps() - t ||
                                     (t == schedule.steps() && coin != c0);
            if (unreachable) {
                first = first ? std::min(*first, t) : t;
                break;
            }
        }
    }
    return first;
}

struct DivergenceEntry {
    int d;
    int n;
    Position p;
    double compiled_fidelity;
    double oracle_fidelity;
    std::optional<int> first_divergent_step;
    std::string note;  // compile error text, if compiling threw
};

struct SkippedTuple {
    int d;
    int n;
    Position p;
    std::string reason;
};

struct TupleResult {
    int d;
    int n;
    Position p;
    double compiled_fidelity;
    double oracle_fidelity;
    int compiled_specials;
    int oracle_specials;
};

// A compiled schedule plus its validation; when the closed form fails, the
// oracle schedule rides along as the fallback.
struct CheckedSchedule {
    Schedule schedule;
    ValidationReport report;
    std::optional<Schedule> fallback;
};

inline CheckedSchedule compile_checked(int d, int n, Position p, int trials, std::uint64_t seed) {
    auto schedule = compile(d, n, p);
    auto report = validate_schedule(schedule, trials, seed);
    std::optional<Schedule> fallback;
    if (!report.pass) fallback = track_flows(d, n, p);
    return {std::move(schedule), report, std::move(fallback)};
}

struct SweepConfig {
    int d_min = 2;
    int d_max = 5;
    int p_min = 1;  // |p| range; both signs are swept
    int p_max = 4;
    std::optional<int> n_min;  // absolute n range; default is per-tuple minimal..minimal+n_extra
    std::optional<int> n_max;
    int n_extra = 3;
    int trials = 5;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct SweepReport {
    std::vector<TupleResult> results;
    std::vector<DivergenceEntry> divergences;
    std::vector<SkippedTuple> skipped;
    std::vector<DivergenceEntry> oracle_failures;
};

inline constexpr std::size_t kSweepBudget = 20000;

namespace detail {

struct SweepTuple {
    int d;
    int n;
    Position p;
};

inline double min_fidelity_over(const Schedule& s, const std::vector<std::vector<Complex>>& inputs) {
    double worst = 1.0;
    for (const auto& v : inputs) worst = std::min(worst, transfer_fidelity(s, v));
    return worst;
}

struct SweepOutcome {
    TupleResult result;
    std::optional<DivergenceEntry> divergence;
    bool oracle_failed = false;
};

inline SweepOutcome run_tuple(const SweepTuple& t, int trials, std::uint64_t seed) {
    std::vector<std::vector<Complex>> inputs;
    for (int c = 0; c < t.d; ++c) inputs.push_back(basis_vector(t.d, c));
    auto rng = tuple_rng(seed, t.d, t.n, t.p);
    for (int i = 0; i < trials; ++i) inputs.push_back(random_unit_vector(static_cast<std::size_t>(t.d), rng));

    SweepOutcome out{{t.d, t.n, t.p, 0.0, 0.0, -1, -1}, std::nullopt, false};
    std::string note;
    std::optional<Schedule> compiled;
    try {
        compiled = compile(t.d, t.n, t.p);
        out.result.compiled_fidelity = min_fidelity_over(*compiled, inputs);
        out.result.compiled_specials = special_count(*compiled);
    } catch (const Error& e) {
        note = e.what();
    }
    try {
        const auto oracle = track_flows(t.d, t.n, t.p);
        out.result.oracle_fidelity = min_fidelity_over(oracle, inputs);
        out.result.oracle_specials = special_count(oracle);
    } catch (const Error& e) {
        note += (note.empty() ? "" : "; ") + std::string("oracle: ") + e.what();
    }
    out.oracle_failed = out.result.oracle_fidelity < 1.0 - kTransferTolerance;
    if (out.result.compiled_fidelity < 1.0 - kTransferTolerance) {
        out.divergence = DivergenceEntry{t.d,
                                         t.n,
                                         t.p,
                                         out.result.compiled_fidelity,
                                         out.result.oracle_fidelity,
                                         compiled ? first_divergent_step(*compiled) : std::nullopt,
                                         note};
    } else if (out.oracle_failed) {
        out.divergence = DivergenceEntry{t.d, t.n, t.p, out.result.compiled_fidelity, out.result.oracle_fidelity,
                                         std::nullopt, note};
    }
    return out;
}

}  // namespace detail

// Visits every (d, n, p) in the grid. Feasible tuples are checked on d basis
// inputs plus `trials` random inputs under both the compiled and the oracle
// schedule; infeasible ones are listed in `skipped`. Tuples run in parallel
// and the report is ordered by (d, |p|, sign, n) regardless.
inline SweepReport sweep(const SweepConfig& cfg) {
    std::vector<detail::SweepTuple> work;
    SweepReport report;
    for (int d = std::max(cfg.d_min, 2); d <= cfg.d_max; ++d) {
        for (int dist = std::max(cfg.p_min, 0); dist <= cfg.p_max; ++dist) {
            for (int sign : {+1, -1}) {
                if (dist == 0 && sign < 0) continue;
                const Position p = sign * dist;
                const int lo = cfg.n_min.value_or(minimal_steps(d, p));
                const int hi = cfg.n_max.value_or(minimal_steps(d, p) + cfg.n_extra);
                for (int n = lo; n <= hi; ++n) {
                    if (feasible(d, n, p)) {
                        work.push_back({d, n, p});
                    } else {
                        std::string reason;
                        if (p == 0) {
                            reason = "p = 0 unsupported";
                        } else if (n < minimal_steps(d, p)) {
                            reason = "n < " + std::to_string(minimal_steps(d, p));
                        } else {
                            reason = "parity of n and p differ (qubit)";
                        }
                        report.skipped.push_back({d, n, p, reason});
                    }
                    if (work.size() + report.skipped.size() > kSweepBudget) {
                        throw BudgetError("sweep exceeds " + std::to_string(kSweepBudget) + " tuples");
                    }
                }
            }
        }
    }

    std::vector<detail::SweepOutcome> outcomes(work.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(cfg.threads == 0 ? hw : cfg.threads,
                                                static_cast<unsigned>(std::max<std::size_t>(work.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < work.size(); i = next++) {
                    outcomes[i] = detail::run_tuple(work[i], cfg.trials, cfg.seed);
                }
            });
        }
    }

    for (auto& o : outcomes) {
        report.results.push_back(o.result);
        if (o.divergence) {
            if (o.oracle_failed) report.oracle_failures.push_back(*o.divergence);
            if (o.result.compiled_fidelity < 1.0 - kTransferTolerance) report.divergences.push_back(*o.divergence);
        }
    }
    return report;
}

}  // namespace qwalk
