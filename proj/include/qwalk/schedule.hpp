#pragma once

// Closed-form coin schedules for perfect transfer of an unknown qudit from
// site 0 to site p in n steps.
//
// Every transfer starts with X_{0<->d-1} at (step 1, site 0), which sends the
// alpha component right and the gamma component left while the beta
// components (self-loop coins) wait at the origin. From there:
//
//   beta flows   X^{k(p)} at (j, 0) releases one beta per step j = 2..d-1
//                toward p; X_{d(p)<->f(j,p)} at (|p|+j, p) parks it on its
//                original coin.
//   alpha/gamma  same parity of n and p:  X at (b+ + 1, b+), X^{d-1} at
//                (b- + 1, -b-), turning each flow around once.
//                opposite parity: four increments park alpha and gamma on a
//                self-loop next to p and release them at the last step.
//
// Entries are keyed by (step, site); anything absent is the identity.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/coins.hpp"
#include "qwalk/core.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

struct Cell {
    int step;
    Position x;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

class Schedule {
public:
    using Entries = std::map<Cell, CoinOp>;

    Schedule(int d, int n, Position p) : d_(CoinBasis(d).d), n_(n), p_(p) {
        if (n < 0) throw FeasibilityError("step count n must be non-negative, got " + std::to_string(n));
    }

    int dim() const { return d_; }
    int steps() const { return n_; }
    Position target() const { return p_; }
    const Entries& entries() const { return entries_; }

    // Places `op` at (step, x). If the cell is already occupied the two are
    // composed, earlier placement first. A product outside the coin family is
    // a ScheduleConflictError; a product equal to the identity clears the cell.
    void place(int step, Position x, const CoinOp& op) {
        if (op.dim() != d_) {
            throw DimensionError("coin with d=" + std::to_string(op.dim()) + " placed in a d=" + std::to_string(d_) +
                                 " schedule");
        }
        if (step < 1 || step > n_) {
            throw FeasibilityError("placement step " + std::to_string(step) + " outside 1.." + std::to_string(n_));
        }
        if (op.is_identity()) return;
        const Cell cell{step, x};
        auto it = entries_.find(cell);
        if (it == entries_.end()) {
            entries_.emplace(cell, op);
            return;
        }
        const auto merged = compose(it->second, op);
        if (!merged) {
            throw ScheduleConflictError("placements " + it->second.label() + " and " + op.label() + " collide at (" +
                                        std::to_string(step) + ", " + std::to_string(x) +
                                        ") and do not compose to a single coin");
        }
        ++collisions_;
        if (merged->is_identity()) {
            entries_.erase(it);
        } else {
            it->second = *merged;
        }
    }

    void erase(int step, Position x) { entries_.erase(Cell{step, x}); }

    CoinOp coin_at(int step, Position x) const {
        const auto it = entries_.find(Cell{step, x});
        return it == entries_.end() ? CoinOp::identity(d_) : it->second;
    }

    CoinMap coins_for_step(int step) const {
        CoinMap out;
        for (auto it = entries_.lower_bound(Cell{step, INT64_MIN}); it != entries_.end() && it->first.step == step;
             ++it) {
            out.emplace(it->first.x, it->second);
        }
        return out;
    }

    // Number of placements that landed on an occupied cell while building.
    int collisions() const { return collisions_; }

    friend bool operator==(const Schedule& a, const Schedule& b) {
        return a.d_ == b.d_ && a.n_ == b.n_ && a.p_ == b.p_ && a.entries_ == b.entries_;
    }

private:
    int d_;
    int n_;
    Position p_;
    Entries entries_;
    int collisions_ = 0;
};

// Non-identity entries after coincident placements were merged.
inline int special_count(const Schedule& s) { return static_cast<int>(s.entries().size()); }

// Sign selectors and half-sums that parametrize the closed forms.
struct SignCombinators {
    int delta1;
    int delta2;
    Position a1;
    Position a2;
    bool same_parity;
    Position b_plus;   // (n + p) / 2, meaningful when same_parity
    Position b_minus;  // (n - p) / 2, meaningful when same_parity
    int k;             // increment power that releases beta flows at the origin
    int d_target;      // coin a released beta flow carries when it reaches p

    SignCombinators(int d, int n, Position p)
        : delta1(p > 0 ? 1 : 0),
          delta2(1 - delta1),
          a1(p * delta1),
          a2(p * delta2),
          same_parity(((n - p) % 2 + 2) % 2 == 0),
          b_plus(same_parity ? (n + p) / 2 : 0),
          b_minus(same_parity ? (n - p) / 2 : 0),
          k(delta1 + (d - 1) * delta2),
          d_target((d - 1) * delta1) {
        if (p == 0) throw UnsupportedTargetError("target p = 0 is not supported (sign selectors undefined)");
    }

    // Coin that the beta flow released at step j must end on.
    int f(int d, int j) const { return (d - j) * delta1 + (j - 1) * delta2; }
};

inline int minimal_steps(int d, Position p) {
    const auto distance = static_cast<int>(std::llabs(p));
    return d == 2 ? distance + 2 : distance + d - 1;
}

namespace detail {

inline void require_target(Position p) {
    if (p == 0) throw UnsupportedTargetError("target p = 0 is not supported (sign selectors undefined)");
}

inline void require_qudit_bound(int d, int n, Position p) {
    if (n < minimal_steps(d, p)) {
        throw FeasibilityError("n >= |p|+d-1 violated: n=" + std::to_string(n) + ", |p|=" +
                               std::to_string(std::llabs(p)) + ", d=" + std::to_string(d));
    }
}

}  // namespace detail

// General qudit schedule, d >= 3.
inline Schedule compile_qudit(int d, int n, Position p) {
    if (d < 3) throw DimensionError("compile_qudit needs d >= 3, got " + std::to_string(d));
    detail::require_target(p);
    detail::require_qudit_bound(d, n, p);
    const SignCombinators sc(d, n, p);
    const auto dist = static_cast<int>(std::llabs(p));

    Schedule s(d, n, p);
    s.place(1, 0, CoinOp::swap(d, 0, d - 1));
    for (int j = 2; j <= d - 1; ++j) {
        s.place(j, 0, CoinOp::increment(d, sc.k));
        s.place(dist + j, p, CoinOp::swap(d, sc.d_target, sc.f(d, j)));
    }
    if (sc.same_parity) {
        s.place(static_cast<int>(sc.b_plus) + 1, sc.b_plus, CoinOp::increment(d, 1));
        s.place(static_cast<int>(sc.b_minus) + 1, -sc.b_minus, CoinOp::increment(d, d - 1));
    } else {
        const auto abs_a1 = static_cast<int>(std::llabs(sc.a1));
        const auto abs_a2 = static_cast<int>(std::llabs(sc.a2));
        s.place(abs_a1 + 2, sc.a1 + 1, CoinOp::increment(d, 2 % d));
        s.place(n - abs_a2, sc.a1 + 1, CoinOp::increment(d, d - 1));
        s.place(abs_a2 + 2, sc.a2 - 1, CoinOp::increment(d, 1));
        s.place(n - abs_a1, sc.a2 - 1, CoinOp::increment(d, d - 2));
    }
    return s;
}

// Qutrit schedule written with {X, X^2} on the beta flow instead of swaps.
// Transfer-equivalent to compile_qudit(3, n, p).
inline Schedule compile_qutrit(int n, Position p) {
    constexpr int d = 3;
    detail::require_target(p);
    detail::require_qudit_bound(d, n, p);
    const SignCombinators sc(d, n, p);
    const auto abs_a1 = static_cast<int>(std::llabs(sc.a1));
    const auto abs_a2 = static_cast<int>(std::llabs(sc.a2));
    const auto x = CoinOp::increment(d, 1);
    const auto x2 = CoinOp::increment(d, 2);

    Schedule s(d, n, p);
    s.place(1, 0, CoinOp::swap(d, 0, 2));
    s.place(abs_a2 + 2, sc.a2, x);
    s.place(abs_a1 + 2, sc.a1, x2);
    if (sc.same_parity) {
        s.place(static_cast<int>(sc.b_plus) + 1, sc.b_plus, x);
        s.place(static_cast<int>(sc.b_minus) + 1, -sc.b_minus, x2);
    } else {
        s.place(abs_a1 + 2, sc.a1 + 1, x2);
        s.place(n - abs_a2, sc.a1 + 1, x2);
        s.place(abs_a2 + 2, sc.a2 - 1, x);
        s.place(n - abs_a1, sc.a2 - 1, x);
    }
    return s;
}

// Qubit schedule (no self-loops): sigma_x at (1, 0), (b- + 1, -b-) and
// (b+ + 1, b+). Only same-parity targets are reachable, and |p| = n is
// impossible for any unitary schedule because both basis states would have to
// leave the origin in the same direction.
inline Schedule compile_qubit(int n, Position p) {
    constexpr int d = 2;
    detail::require_target(p);
    if (((n - p) % 2 + 2) % 2 != 0) {
        throw FeasibilityError("qubit transfer needs n and p of equal parity: n=" + std::to_string(n) +
                               ", p=" + std::to_string(p));
    }
    if (n < minimal_steps(d, p)) {
        throw FeasibilityError("n >= |p|+2 violated for qubit transfer: n=" + std::to_string(n) + ", |p|=" +
                               std::to_string(std::llabs(p)));
    }
    const SignCombinators sc(d, n, p);
    const auto sigma_x = CoinOp::increment(d, 1);

    Schedule s(d, n, p);
    s.place(1, 0, sigma_x);
    s.place(static_cast<int>(sc.b_minus) + 1, -sc.b_minus, sigma_x);
    s.place(static_cast<int>(sc.b_plus) + 1, sc.b_plus, sigma_x);
    return s;
}

// Dispatches on d: qubit form for d = 2, general qudit form otherwise.
inline Schedule compile(int d, int n, Position p) {
    CoinBasis basis(d);
    return d == 2 ? compile_qubit(n, p) : compile_qudit(d, n, p);
}

// True when compile(d, n, p) accepts the tuple.
inline bool feasible(int d, int n, Position p) {
    if (d < 2 || p == 0 || n < minimal_steps(d, p)) return false;
    return d > 2 || ((n - p) % 2 + 2) % 2 == 0;
}

// Advances `state` by one step using the schedule column for the next step.
inline WalkerState step(const WalkerState& state, const Schedule& schedule) {
    if (state.dim() != schedule.dim()) {
        throw DimensionError("schedule has d=" + std::to_string(schedule.dim()) + ", state has d=" +
                             std::to_string(state.dim()));
    }
    const int next = state.step_count() + 1;
    if (next > schedule.steps()) {
        throw StepError("schedule has " + std::to_string(schedule.steps()) + " steps, state is already at step " +
                        std::to_string(state.step_count()));
    }
    return step(state, schedule.coins_for_step(next));
}

// Runs the schedule to completion from a step-0 state.
inline WalkerState evolve(const Schedule& schedule, WalkerState state) {
    if (state.step_count() != 0) {
        throw StepError("evolve expects a step-0 state, got step " + std::to_string(state.step_count()));
    }
    for (int t = 0; t < schedule.steps(); ++t) state = step(state, schedule);
    return state;
}

// Fidelity between the evolved state and the coin state parked at the target.
inline double transfer_fidelity(const Schedule& schedule, std::span<const Complex> coin_state) {
    const auto out = evolve(schedule, new_localized(schedule.dim(), 0, coin_state));
    return fidelity(out, new_localized(schedule.dim(), schedule.target(), coin_state));
}

// Where a basis state launched at the origin ends up: (site, coin).
inline std::pair<Position, int> track_basis(const Schedule& schedule, int coin) {
    const CoinBasis basis(schedule.dim());
    Position x = 0;
    for (int t = 1; t <= schedule.steps(); ++t) {
        coin = schedule.coin_at(t, x).image(coin);
        x += CoinBasis::displacement(basis.direction(coin));
    }
    return {x, coin};
}

// End-to-end transfer map on the d basis inputs. Two schedules with equal maps
// are transfer-equivalent.
inline std::vector<std::pair<Position, int>> transfer_map(const Schedule& schedule) {
    std::vector<std::pair<Position, int>> out;
    for (int c = 0; c < schedule.dim(); ++c) out.push_back(track_basis(schedule, c));
    return out;
}

}  // namespace qwalk
