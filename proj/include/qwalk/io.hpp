#pragma once

// JSON encodings for coins, schedules, routing plans and state snapshots.
// Object members are emitted in a fixed order and entries are sorted, so equal
// values always serialize to equal bytes.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/coins.hpp"
#include "qwalk/core.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/harness.hpp"
#include "qwalk/routing.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const CoinOp& op) {
    Json j;
    if (const auto* inc = std::get_if<IncrementCoin>(&op.variant())) {
        j["op"] = "Xk";
        j["k"] = inc->k;
    } else if (const auto* sw = std::get_if<SwapCoin>(&op.variant())) {
        j["op"] = "swap";
        j["i"] = sw->i;
        j["j"] = sw->j;
    } else {
        j["op"] = "I";
    }
    return j;
}

namespace detail {

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("field '") + key + "' has the wrong type: " + e.what());
    }
}

}  // namespace detail

inline CoinOp coin_from_json(const Json& j, int d) {
    const auto kind = detail::field<std::string>(j, "op");
    try {
        if (kind == "I") return CoinOp::identity(d);
        if (kind == "Xk") return CoinOp::increment(d, detail::field<int>(j, "k"));
        if (kind == "swap") return CoinOp::swap(d, detail::field<int>(j, "i"), detail::field<int>(j, "j"));
    } catch (const DimensionError& e) {
        throw FormatError(std::string("invalid coin: ") + e.what());
    }
    throw FormatError("unknown coin op '" + kind + "'");
}

inline Json to_json(const Schedule& s) {
    Json j;
    j["d"] = s.dim();
    j["n"] = s.steps();
    j["p"] = s.target();
    Json entries = Json::array();
    for (const auto& [cell, op] : s.entries()) {
        Json e;
        e["step"] = cell.step;
        e["x"] = cell.x;
        e["op"] = to_json(op);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline Schedule schedule_from_json(const Json& j) {
    const int d = detail::field<int>(j, "d");
    const int n = detail::field<int>(j, "n");
    const auto p = detail::field<Position>(j, "p");
    if (d < 2) throw FormatError("schedule d must be >= 2");
    if (n < 0) throw FormatError("schedule n must be >= 0");
    const auto entries = j.contains("entries") ? j.at("entries") : Json::array();
    if (!entries.is_array()) throw FormatError("'entries' must be an array");
    Schedule s(d, n, p);
    for (const auto& e : entries) {
        const int step = detail::field<int>(e, "step");
        const auto x = detail::field<Position>(e, "x");
        if (!e.contains("op")) throw FormatError("schedule entry missing 'op'");
        if (step < 1 || step > n) {
            throw FormatError("entry step " + std::to_string(step) + " outside 1.." + std::to_string(n));
        }
        const Cell cell{step, x};
        if (s.entries().contains(cell)) {
            throw FormatError("duplicate entry at (" + std::to_string(step) + ", " + std::to_string(x) + ")");
        }
        s.place(step, x, coin_from_json(e.at("op"), d));
    }
    return s;
}

inline Json to_json(const RoutingPlan& plan) {
    Json j;
    j["d"] = plan.dim();
    j["n"] = plan.steps();
    j["targets"] = plan.targets();
    Json axes = Json::array();
    for (const auto& s : plan.schedules()) axes.push_back(to_json(s));
    j["axes"] = std::move(axes);
    return j;
}

inline RoutingPlan plan_from_json(const Json& j) {
    const int d = detail::field<int>(j, "d");
    const int n = detail::field<int>(j, "n");
    const auto targets = detail::field<PositionVec>(j, "targets");
    if (!j.contains("axes") || !j.at("axes").is_array()) throw FormatError("plan needs an 'axes' array");
    std::vector<Schedule> axes;
    for (const auto& a : j.at("axes")) axes.push_back(schedule_from_json(a));
    for (const auto& s : axes) {
        if (s.dim() != d || s.steps() != n) throw FormatError("axis schedule disagrees with plan d/n");
    }
    try {
        return RoutingPlan(targets, std::move(axes));
    } catch (const DimensionError& e) {
        throw FormatError(e.what());
    }
}

// {d, step, entries: [{x, coin, re, im}]} sorted by (x, coin); amplitudes
// below the prune threshold are omitted.
inline Json to_json(const WalkerState& state) {
    Json j;
    j["d"] = state.dim();
    j["step"] = state.step_count();
    Json entries = Json::array();
    for (const auto& [x, coins] : state.sites()) {
        for (std::size_t c = 0; c < coins.size(); ++c) {
            if (std::abs(coins[c]) < kPruneThreshold) continue;
            Json e;
            e["x"] = x;
            e["coin"] = c;
            e["re"] = coins[c].real();
            e["im"] = coins[c].imag();
            entries.push_back(std::move(e));
        }
    }
    j["entries"] = std::move(entries);
    return j;
}

// {step, entries: [{positions, coins, re, im}]} sorted by (positions, coins).
inline Json to_json(const MultiWalkerState& state) {
    Json j;
    j["step"] = state.step_count();
    Json entries = Json::array();
    for (const auto& [xs, coins] : state.sites()) {
        for (std::size_t idx = 0; idx < coins.size(); ++idx) {
            if (std::abs(coins[idx]) < kPruneThreshold) continue;
            Json e;
            e["positions"] = xs;
            e["coins"] = split_index(idx, state.dim(), state.axes());
            e["re"] = coins[idx].real();
            e["im"] = coins[idx].imag();
            entries.push_back(std::move(e));
        }
    }
    j["entries"] = std::move(entries);
    return j;
}

inline Json to_json(const ValidationReport& r) {
    Json j;
    j["min_fidelity"] = r.min_fidelity;
    j["trials"] = r.trials;
    j["basis_checks"] = r.basis_checks;
    j["pass"] = r.pass;
    return j;
}

inline Json to_json(const DivergenceEntry& e) {
    Json j;
    j["d"] = e.d;
    j["n"] = e.n;
    j["p"] = e.p;
    j["compiled_fidelity"] = e.compiled_fidelity;
    j["oracle_fidelity"] = e.oracle_fidelity;
    j["first_divergent_step"] = e.first_divergent_step ? Json(*e.first_divergent_step) : Json(nullptr);
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

inline Json to_json(const SkippedTuple& t) {
    Json j;
    j["d"] = t.d;
    j["n"] = t.n;
    j["p"] = t.p;
    j["reason"] = t.reason;
    return j;
}

inline Json to_json(const SweepReport& r) {
    Json j;
    j["tuples_checked"] = r.results.size();
    Json divergences = Json::array();
    for (const auto& e : r.divergences) divergences.push_back(to_json(e));
    j["divergences"] = std::move(divergences);
    Json failures = Json::array();
    for (const auto& e : r.oracle_failures) failures.push_back(to_json(e));
    j["oracle_failures"] = std::move(failures);
    Json skipped = Json::array();
    for (const auto& t : r.skipped) skipped.push_back(to_json(t));
    j["skipped"] = std::move(skipped);
    return j;
}

// Accepts [a, b, ...] where each element is a real number, a [re, im] pair or
// an {"re", "im"} object.
inline std::vector<Complex> coin_vector_from_json(const Json& j) {
    if (!j.is_array()) throw FormatError("coin amplitudes must be a JSON array");
    std::vector<Complex> out;
    for (const auto& a : j) {
        if (a.is_number()) {
            out.emplace_back(a.get<double>(), 0.0);
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
            out.emplace_back(a[0].get<double>(), a[1].get<double>());
        } else if (a.is_object()) {
            out.emplace_back(detail::field<double>(a, "re"), detail::field<double>(a, "im"));
        } else {
            throw FormatError("cannot read amplitude " + a.dump());
        }
    }
    return out;
}

inline Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

inline Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

inline void write_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw Error("write to " + path + " failed");
}

}  // namespace qwalk::io
