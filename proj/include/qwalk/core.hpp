#pragma once

// Exact state of a one-dimensional lackadaisical walk and its one-step
// evolution U = S (I (x) C).
//
// The state is a sparse table site -> coin subvector. Operations return new
// states; a WalkerState is never mutated after it is built.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qwalk/coins.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

using Position = std::int64_t;

// Coin operators for one step, keyed by site. Sites absent from the map get
// the identity.
using CoinMap = std::map<Position, CoinOp>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPruneThreshold = 1e-15;

inline double squared_norm(std::span<const Complex> amplitudes) {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return sum;
}

inline void require_unit_norm(std::span<const Complex> amplitudes, const char* what) {
    const double n2 = squared_norm(amplitudes);
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        throw NormalizationError(std::string(what) + " must have unit norm, squared norm is " + std::to_string(n2));
    }
}

class WalkerState {
public:
    using Sites = std::map<Position, std::vector<Complex>>;

    WalkerState(int d, Sites sites, int step_count) : basis_(d), sites_(std::move(sites)), step_(step_count) {
        for (const auto& [x, coins] : sites_) {
            if (static_cast<int>(coins.size()) != d) {
                throw DimensionError("site " + std::to_string(x) + " holds " + std::to_string(coins.size()) +
                                     " coin amplitudes, expected " + std::to_string(d));
            }
        }
        if (step_count < 0) throw StepError("step count must be non-negative");
    }

    int dim() const { return basis_.d; }
    const CoinBasis& basis() const { return basis_; }
    int step_count() const { return step_; }
    const Sites& sites() const { return sites_; }

    Complex amplitude(Position x, int coin) const {
        const auto it = sites_.find(x);
        if (it == sites_.end() || coin < 0 || coin >= basis_.d) return {};
        return it->second[static_cast<std::size_t>(coin)];
    }

    double norm_squared() const {
        double sum = 0.0;
        for (const auto& [x, coins] : sites_) sum += squared_norm(coins);
        return sum;
    }

    // Positions carrying at least one amplitude above the prune threshold.
    std::vector<Position> support() const {
        std::vector<Position> out;
        for (const auto& [x, coins] : sites_) {
            for (const auto& a : coins) {
                if (std::abs(a) >= kPruneThreshold) {
                    out.push_back(x);
                    break;
                }
            }
        }
        return out;
    }

private:
    CoinBasis basis_;
    Sites sites_;
    int step_;
};

inline WalkerState new_localized(int d, Position x0, std::span<const Complex> coin_amplitudes) {
    const CoinBasis basis(d);
    if (static_cast<int>(coin_amplitudes.size()) != d) {
        throw DimensionError("expected " + std::to_string(d) + " coin amplitudes, got " +
                             std::to_string(coin_amplitudes.size()));
    }
    require_unit_norm(coin_amplitudes, "coin state");
    WalkerState::Sites sites;
    sites.emplace(x0, std::vector<Complex>(coin_amplitudes.begin(), coin_amplitudes.end()));
    return WalkerState(basis.d, std::move(sites), 0);
}

inline WalkerState new_localized(int d, Position x0, std::initializer_list<Complex> coin_amplitudes) {
    return new_localized(d, x0, std::span<const Complex>(coin_amplitudes.begin(), coin_amplitudes.size()));
}

namespace detail {

inline bool negligible(const std::vector<Complex>& coins) {
    for (const auto& a : coins) {
        if (std::abs(a) >= kPruneThreshold) return false;
    }
    return true;
}

// Moves every coin component one site according to its direction. `sign` = -1
// runs the inverse shift.
inline WalkerState::Sites shift_sites(const CoinBasis& basis, const WalkerState::Sites& sites, int sign) {
    WalkerState::Sites out;
    const auto d = static_cast<std::size_t>(basis.d);
    for (const auto& [x, coins] : sites) {
        for (int c = 0; c < basis.d; ++c) {
            const Complex a = coins[static_cast<std::size_t>(c)];
            if (a == Complex{}) continue;
            const Position target = x + sign * CoinBasis::displacement(basis.direction(c));
            auto [it, inserted] = out.try_emplace(target, d);
            it->second[static_cast<std::size_t>(c)] += a;
        }
    }
    std::erase_if(out, [](const auto& kv) { return negligible(kv.second); });
    return out;
}

}  // namespace detail

// Conditional shift: coin 0 moves one site left, coin d-1 one site right,
// self-loop coins stay. Does not advance the step counter.
inline WalkerState shift(const WalkerState& state) {
    return WalkerState(state.dim(), detail::shift_sites(state.basis(), state.sites(), +1), state.step_count());
}

// Inverse of shift(); used to check that shift is a basis permutation.
inline WalkerState inverse_shift(const WalkerState& state) {
    return WalkerState(state.dim(), detail::shift_sites(state.basis(), state.sites(), -1), state.step_count());
}

// Applies coin_map[x] to the coin subvector at each site x.
inline WalkerState apply_coins(const WalkerState& state, const CoinMap& coin_map) {
    for (const auto& [x, op] : coin_map) {
        if (op.dim() != state.dim()) {
            throw DimensionError("coin at site " + std::to_string(x) + " has d=" + std::to_string(op.dim()) +
                                 ", state has d=" + std::to_string(state.dim()));
        }
    }
    WalkerState::Sites out;
    for (const auto& [x, coins] : state.sites()) {
        const auto it = coin_map.find(x);
        if (it == coin_map.end()) {
            out.emplace(x, coins);
            continue;
        }
        std::vector<Complex> flipped(coins.size());
        it->second.apply(coins, flipped);
        out.emplace(x, std::move(flipped));
    }
    return WalkerState(state.dim(), std::move(out), state.step_count());
}

// One walk step: coins, then shift. Advances the step counter.
inline WalkerState step(const WalkerState& state, const CoinMap& coin_map) {
    const WalkerState flipped = apply_coins(state, coin_map);
    return WalkerState(state.dim(), detail::shift_sites(state.basis(), flipped.sites(), +1),
                       state.step_count() + 1);
}

inline Complex inner_product(const WalkerState& a, const WalkerState& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("cannot compare states with d=" + std::to_string(a.dim()) + " and d=" +
                             std::to_string(b.dim()));
    }
    Complex sum{};
    for (const auto& [x, coins_a] : a.sites()) {
        const auto it = b.sites().find(x);
        if (it == b.sites().end()) continue;
        for (std::size_t c = 0; c < coins_a.size(); ++c) sum += std::conj(coins_a[c]) * it->second[c];
    }
    return sum;
}

// |<a|b>|^2, insensitive to global phase.
inline double fidelity(const WalkerState& a, const WalkerState& b) { return std::norm(inner_product(a, b)); }

}  // namespace qwalk
