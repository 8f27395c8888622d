#pragma once

// Routing an m-qudit coin state across an m-axis lattice. Each axis carries
// its own walker and its own schedule; at step k the joint coin at site
// (x_1..x_m) is C1_{k,x_1} (x) ... (x) Cm_{k,x_m}, and each coordinate then
// shifts by its own coin. Entangled inputs survive because every coin acts
// locally on one axis.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/coins.hpp"
#include "qwalk/core.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

using PositionVec = std::vector<Position>;

// Joint coin index of (c_1..c_m); axis 0 is the most significant digit.
inline std::size_t joint_index(std::span<const int> coins, int d) {
    std::size_t idx = 0;
    for (int c : coins) idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(c);
    return idx;
}

inline std::vector<int> split_index(std::size_t idx, int d, int m) {
    std::vector<int> coins(static_cast<std::size_t>(m));
    for (int axis = m - 1; axis >= 0; --axis) {
        coins[static_cast<std::size_t>(axis)] = static_cast<int>(idx % static_cast<std::size_t>(d));
        idx /= static_cast<std::size_t>(d);
    }
    return coins;
}

inline std::size_t coin_space_size(int d, int m) {
    std::size_t size = 1;
    for (int i = 0; i < m; ++i) size *= static_cast<std::size_t>(d);
    return size;
}

class MultiWalkerState {
public:
    using Sites = std::map<PositionVec, std::vector<Complex>>;

    MultiWalkerState(int m, int d, Sites sites, int step_count)
        : m_(m), basis_(d), sites_(std::move(sites)), step_(step_count) {
        if (m < 1) throw DimensionError("need at least one axis, got m=" + std::to_string(m));
        const auto size = coin_space_size(d, m);
        for (const auto& [xs, coins] : sites_) {
            if (static_cast<int>(xs.size()) != m || coins.size() != size) {
                throw DimensionError("joint site entry does not match m=" + std::to_string(m) + ", d=" +
                                     std::to_string(d));
            }
        }
    }

    // Coin state `coin_amplitudes` (length d^m) at `origin`.
    static MultiWalkerState localized(int m, int d, const PositionVec& origin,
                                      std::span<const Complex> coin_amplitudes) {
        if (static_cast<int>(origin.size()) != m) throw DimensionError("origin must have m coordinates");
        if (coin_amplitudes.size() != coin_space_size(d, m)) {
            throw DimensionError("joint coin state needs d^m = " + std::to_string(coin_space_size(d, m)) +
                                 " amplitudes, got " + std::to_string(coin_amplitudes.size()));
        }
        require_unit_norm(coin_amplitudes, "joint coin state");
        Sites sites;
        sites.emplace(origin, std::vector<Complex>(coin_amplitudes.begin(), coin_amplitudes.end()));
        return MultiWalkerState(m, d, std::move(sites), 0);
    }

    int axes() const { return m_; }
    int dim() const { return basis_.d; }
    const CoinBasis& basis() const { return basis_; }
    int step_count() const { return step_; }
    const Sites& sites() const { return sites_; }

    Complex amplitude(const PositionVec& xs, std::span<const int> coins) const {
        const auto it = sites_.find(xs);
        if (it == sites_.end()) return {};
        return it->second[joint_index(coins, basis_.d)];
    }

    // Joint coin vector at one site (zeros when the site is empty).
    std::vector<Complex> coin_state_at(const PositionVec& xs) const {
        const auto it = sites_.find(xs);
        if (it == sites_.end()) return std::vector<Complex>(coin_space_size(basis_.d, m_));
        return it->second;
    }

    double norm_squared() const {
        double sum = 0.0;
        for (const auto& [xs, coins] : sites_) sum += squared_norm(coins);
        return sum;
    }

private:
    int m_;
    CoinBasis basis_;
    Sites sites_;
    int step_;
};

class RoutingPlan {
public:
    RoutingPlan(PositionVec targets, std::vector<Schedule> axes) : targets_(std::move(targets)), axes_(std::move(axes)) {
        if (axes_.empty()) throw DimensionError("routing plan needs at least one axis");
        if (axes_.size() != targets_.size()) {
            throw DimensionError("routing plan has " + std::to_string(axes_.size()) + " schedules for " +
                                 std::to_string(targets_.size()) + " targets");
        }
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            if (axes_[i].dim() != axes_[0].dim()) throw DimensionError("axis schedules disagree on d");
            if (axes_[i].steps() != axes_[0].steps()) throw DimensionError("axis schedules disagree on n");
            if (axes_[i].target() != targets_[i]) {
                throw DimensionError("axis " + std::to_string(i) + " schedule targets " +
                                     std::to_string(axes_[i].target()) + ", plan says " + std::to_string(targets_[i]));
            }
        }
    }

    int axes() const { return static_cast<int>(axes_.size()); }
    int dim() const { return axes_.front().dim(); }
    int steps() const { return axes_.front().steps(); }
    const PositionVec& targets() const { return targets_; }
    const std::vector<Schedule>& schedules() const { return axes_; }
    const Schedule& axis(int i) const { return axes_.at(static_cast<std::size_t>(i)); }

    int special_settings() const {
        int total = 0;
        for (const auto& s : axes_) total += special_count(s);
        return total;
    }

    friend bool operator==(const RoutingPlan&, const RoutingPlan&) = default;

private:
    PositionVec targets_;
    std::vector<Schedule> axes_;
};

// Smallest n >= every axis bound for which each axis is compilable.
inline int common_steps(int d, const PositionVec& targets) {
    CoinBasis basis(d);
    if (targets.empty()) throw DimensionError("need at least one target");
    int n = 0;
    std::string bounds;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] == 0) {
            throw UnsupportedTargetError("axis " + std::to_string(i) + " has target 0, which is not supported");
        }
        n = std::max(n, minimal_steps(d, targets[i]));
        bounds += (bounds.empty() ? "" : ", ") + std::string("axis ") + std::to_string(i) +
                  ": n >= " + std::to_string(minimal_steps(d, targets[i]));
    }
    if (d == 2) {
        // Qubit axes need n of the same parity as their target.
        const auto parity = [](Position v) { return ((v % 2) + 2) % 2; };
        for (auto t : targets) {
            if (parity(t) != parity(targets.front())) {
                throw FeasibilityError("no common n for qubit axes of mixed target parity (" + bounds + ")");
            }
        }
        if (parity(n) != parity(targets.front())) ++n;
    }
    return n;
}

// Compiles one schedule per axis. With no n given the smallest common n is
// used; otherwise every axis must be feasible at the given n.
inline RoutingPlan plan_route(int d, const PositionVec& targets, std::optional<int> n = std::nullopt) {
    const int steps = n.value_or(common_steps(d, targets));
    std::vector<Schedule> axes;
    std::string violations;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] == 0) {
            throw UnsupportedTargetError("axis " + std::to_string(i) + " has target 0, which is not supported");
        }
        if (!feasible(d, steps, targets[i])) {
            violations += (violations.empty() ? "" : "; ") + std::string("axis ") + std::to_string(i) + " (p=" +
                          std::to_string(targets[i]) + ") needs n >= " + std::to_string(minimal_steps(d, targets[i])) +
                          (d == 2 ? " with matching parity" : "");
            continue;
        }
        axes.push_back(compile(d, steps, targets[i]));
    }
    if (!violations.empty()) {
        throw FeasibilityError("n=" + std::to_string(steps) + " is infeasible: " + violations);
    }
    return RoutingPlan(targets, std::move(axes));
}

// Step k of the plan: per-axis coins, then per-axis shift.
inline MultiWalkerState route_step(const MultiWalkerState& state, const RoutingPlan& plan, int k) {
    if (state.axes() != plan.axes() || state.dim() != plan.dim()) {
        throw DimensionError("state (m=" + std::to_string(state.axes()) + ", d=" + std::to_string(state.dim()) +
                             ") does not match plan (m=" + std::to_string(plan.axes()) + ", d=" +
                             std::to_string(plan.dim()) + ")");
    }
    if (k < 1 || k > plan.steps()) {
        throw StepError("step " + std::to_string(k) + " outside 1.." + std::to_string(plan.steps()));
    }
    if (k != state.step_count() + 1) {
        throw StepError("state is at step " + std::to_string(state.step_count()) + ", cannot apply step " +
                        std::to_string(k));
    }
    const int m = state.axes();
    const int d = state.dim();
    const auto& basis = state.basis();
    const auto size = coin_space_size(d, m);

    MultiWalkerState::Sites out;
    std::vector<CoinOp> ops;
    std::vector<int> flipped(static_cast<std::size_t>(m));
    PositionVec moved(static_cast<std::size_t>(m));
    for (const auto& [xs, coins] : state.sites()) {
        ops.clear();
        for (int axis = 0; axis < m; ++axis) ops.push_back(plan.axis(axis).coin_at(k, xs[static_cast<std::size_t>(axis)]));
        for (std::size_t idx = 0; idx < size; ++idx) {
            const Complex a = coins[idx];
            if (a == Complex{}) continue;
            const auto cs = split_index(idx, d, m);
            for (int axis = 0; axis < m; ++axis) {
                const auto ax = static_cast<std::size_t>(axis);
                flipped[ax] = ops[ax].image(cs[ax]);
                moved[ax] = xs[ax] + CoinBasis::displacement(basis.direction(flipped[ax]));
            }
            auto [it, inserted] = out.try_emplace(moved, size);
            it->second[joint_index(flipped, d)] += a;
        }
    }
    std::erase_if(out, [](const auto& kv) {
        return std::all_of(kv.second.begin(), kv.second.end(),
                           [](const Complex& a) { return std::abs(a) < kPruneThreshold; });
    });
    return MultiWalkerState(m, d, std::move(out), state.step_count() + 1);
}

using RouteObserver = std::function<void(const MultiWalkerState&)>;

// Runs the whole plan from the origin; `observer` sees every intermediate
// state including the initial one.
inline MultiWalkerState route(const RoutingPlan& plan, std::span<const Complex> coin_state,
                              const RouteObserver& observer = {}) {
    auto state = MultiWalkerState::localized(plan.axes(), plan.dim(), PositionVec(static_cast<std::size_t>(plan.axes()), 0),
                                             coin_state);
    if (observer) observer(state);
    for (int k = 1; k <= plan.steps(); ++k) {
        state = route_step(state, plan, k);
        if (observer) observer(state);
    }
    return state;
}

inline MultiWalkerState route(int d, const PositionVec& targets, std::optional<int> n,
                              std::span<const Complex> coin_state) {
    return route(plan_route(d, targets, n), coin_state);
}

// |<targets, reference | state>|^2.
inline double entanglement_check(const MultiWalkerState& state, const PositionVec& targets,
                                 std::span<const Complex> reference) {
    if (static_cast<int>(targets.size()) != state.axes()) {
        throw DimensionError("expected " + std::to_string(state.axes()) + " target coordinates, got " +
                             std::to_string(targets.size()));
    }
    if (reference.size() != coin_space_size(state.dim(), state.axes())) {
        throw DimensionError("reference coin state has wrong length");
    }
    const auto it = state.sites().find(targets);
    if (it == state.sites().end()) return 0.0;
    Complex overlap{};
    for (std::size_t i = 0; i < reference.size(); ++i) overlap += std::conj(reference[i]) * it->second[i];
    return std::norm(overlap);
}

// Purity Tr(rho^2) of the one-axis reduced density matrix of a joint coin
// state (length d^m). 1 for product states, 1/d for maximally entangled pairs.
inline double reduced_purity(std::span<const Complex> coin_state, int d, int m, int axis) {
    if (coin_state.size() != coin_space_size(d, m)) throw DimensionError("joint coin state has wrong length");
    if (axis < 0 || axis >= m) throw DimensionError("axis out of range");
    // Gram matrix over the kept axis: rho(a, b) = sum over the rest of psi(a, r) conj(psi(b, r)).
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    const auto size = coin_space_size(d, m);
    for (std::size_t i = 0; i < size; ++i) {
        const auto ci = split_index(i, d, m);
        for (std::size_t j = 0; j < size; ++j) {
            const auto cj = split_index(j, d, m);
            bool rest_equal = true;
            for (int ax = 0; ax < m && rest_equal; ++ax) {
                if (ax != axis) rest_equal = ci[static_cast<std::size_t>(ax)] == cj[static_cast<std::size_t>(ax)];
            }
            if (!rest_equal) continue;
            rho(ci[static_cast<std::size_t>(axis)], cj[static_cast<std::size_t>(axis)]) +=
                coin_state[i] * std::conj(coin_state[j]);
        }
    }
    return (rho * rho).trace().real();
}

}  // namespace qwalk
