#pragma once

// Independent ground truth for the schedule compiler.
//
// track_flows() never looks at the closed forms. It fixes an l/s/r itinerary
// for every basis flow, walks all flows in lockstep, and at each (step, site)
// searches the coin family for an operator that gives every flow present the
// direction its itinerary asks for. The result is checked by simulating the d
// basis inputs before it is returned.
//
// The path counters cover the lazy-walk middle segment of length n - 2: the
// closed binomial sum and a direct enumeration of {l,s,r}^(n-2).

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/coins.hpp"
#include "qwalk/core.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

struct FlowPath {
    int flow_id;  // coin index the flow starts and ends on
    std::vector<Direction> moves;

    // Site after each move, starting from 0 (size moves.size() + 1).
    std::vector<Position> positions() const {
        std::vector<Position> out{0};
        for (auto m : moves) out.push_back(out.back() + CoinBasis::displacement(m));
        return out;
    }

    std::string word() const {
        std::string out;
        for (auto m : moves) out.push_back(direction_letter(m));
        return out;
    }
};

namespace detail {

inline void append(std::vector<Direction>& moves, Direction dir, long count) {
    for (long i = 0; i < count; ++i) moves.push_back(dir);
}

inline void require_oracle_feasible(int d, int n, Position p) {
    require_target(p);
    if (d == 2) {
        if (((n - p) % 2 + 2) % 2 != 0) {
            throw FeasibilityError("qubit transfer needs n and p of equal parity: n=" + std::to_string(n) +
                                   ", p=" + std::to_string(p));
        }
        if (n < minimal_steps(d, p)) {
            throw FeasibilityError("n >= |p|+2 violated for qubit transfer: n=" + std::to_string(n));
        }
        return;
    }
    require_qudit_bound(d, n, p);
}

}  // namespace detail

// Canonical itineraries. Beta flows leave the origin first, one per step, and
// park at p; alpha overshoots to the near side of p and waits; gamma waits on
// the far side of the origin and crosses last. Qubits have no self-loop, so
// alpha and gamma each turn around once.
inline std::vector<FlowPath> canonical_itineraries(int d, int n, Position p) {
    CoinBasis basis(d);
    detail::require_oracle_feasible(d, n, p);
    const long dist = std::labs(static_cast<long>(p));
    const auto l = Direction::left;
    const auto s = Direction::stay;
    const auto r = Direction::right;

    std::vector<FlowPath> flows;
    if (d == 2) {
        const long b_plus = (n + p) / 2;
        const long b_minus = (n - p) / 2;
        FlowPath alpha{0, {}};
        detail::append(alpha.moves, r, b_plus);
        detail::append(alpha.moves, l, b_minus);
        FlowPath gamma{1, {}};
        detail::append(gamma.moves, l, b_minus);
        detail::append(gamma.moves, r, b_plus);
        flows.push_back(alpha);
        flows.push_back(gamma);
        return flows;
    }

    const long idle = n - 2 - dist;
    const Direction toward = p > 0 ? r : l;

    FlowPath alpha{0, {}};
    FlowPath gamma{d - 1, {}};
    if (p > 0) {
        detail::append(alpha.moves, r, dist + 1);
        detail::append(alpha.moves, s, idle);
        alpha.moves.push_back(l);
        gamma.moves.push_back(l);
        detail::append(gamma.moves, s, idle);
        detail::append(gamma.moves, r, dist + 1);
    } else {
        alpha.moves.push_back(r);
        detail::append(alpha.moves, s, idle);
        detail::append(alpha.moves, l, dist + 1);
        detail::append(gamma.moves, l, dist + 1);
        detail::append(gamma.moves, s, idle);
        gamma.moves.push_back(r);
    }
    flows.push_back(alpha);

    for (int c = 1; c <= d - 2; ++c) {
        const long release = c + 1;  // step at which beta_c leaves the origin
        FlowPath beta{c, {}};
        detail::append(beta.moves, s, release - 1);
        detail::append(beta.moves, toward, dist);
        detail::append(beta.moves, s, n - (release - 1) - dist);
        flows.push_back(beta);
    }
    flows.push_back(gamma);
    return flows;
}

namespace detail {

struct FlowCursor {
    const FlowPath* path;
    Position x;
    int coin;
    int target = -1;
};

// Picks post-flip coins for the flows sharing one site at `step`, then finds a
// family operator realizing them.
inline CoinOp settle_site(const CoinBasis& basis, int step, int n, std::vector<FlowCursor*>& here) {
    std::vector<bool> taken(static_cast<std::size_t>(basis.d), false);
    for (auto* f : here) {
        const Direction want = f->path->moves[static_cast<std::size_t>(step - 1)];
        if (step == n) {
            f->target = f->path->flow_id;
        } else if (basis.direction(f->coin) == want) {
            f->target = f->coin;
        } else {
            f->target = -1;
            continue;
        }
        taken[static_cast<std::size_t>(f->target)] = true;
    }
    for (auto* f : here) {
        if (f->target >= 0) continue;
        const Direction want = f->path->moves[static_cast<std::size_t>(step - 1)];
        if (want == Direction::left) {
            f->target = 0;
        } else if (want == Direction::right) {
            f->target = basis.d - 1;
        } else {
            const int own = f->path->flow_id;
            if (basis.is_stay(own) && !taken[static_cast<std::size_t>(own)]) {
                f->target = own;
            } else {
                for (int c = 1; c <= basis.d - 2; ++c) {
                    if (!taken[static_cast<std::size_t>(c)]) {
                        f->target = c;
                        break;
                    }
                }
            }
        }
        if (f->target < 0 || taken[static_cast<std::size_t>(f->target)]) {
            throw OracleDefect("no free coin for flow " + std::to_string(f->path->flow_id) + " at step " +
                               std::to_string(step));
        }
        taken[static_cast<std::size_t>(f->target)] = true;
    }

    // Identity first, then swaps, then increments.
    std::vector<CoinOp> candidates{CoinOp::identity(basis.d)};
    for (int i = 0; i < basis.d; ++i) {
        for (int j = i + 1; j < basis.d; ++j) candidates.push_back(CoinOp::swap(basis.d, i, j));
    }
    for (int k = 1; k < basis.d; ++k) candidates.push_back(CoinOp::increment(basis.d, k));

    for (const auto& op : candidates) {
        const bool fits = std::all_of(here.begin(), here.end(), [&](const FlowCursor* f) {
            return op.image(f->coin) == f->target;
        });
        if (fits) return op;
    }
    throw OracleDefect("no single coin realizes the flow directions at step " + std::to_string(step) + ", site " +
                       std::to_string(here.front()->x));
}

}  // namespace detail

// Schedule derived by tracking every basis flow along its itinerary.
inline Schedule track_flows(int d, int n, Position p) {
    const CoinBasis basis(d);
    const auto paths = canonical_itineraries(d, n, p);

    std::vector<detail::FlowCursor> flows;
    flows.reserve(paths.size());
    for (const auto& path : paths) {
        if (static_cast<int>(path.moves.size()) != n) {
            throw OracleDefect("itinerary for flow " + std::to_string(path.flow_id) + " has wrong length");
        }
        flows.push_back({&path, 0, path.flow_id});
    }

    Schedule schedule(d, n, p);
    for (int t = 1; t <= n; ++t) {
        std::map<Position, std::vector<detail::FlowCursor*>> by_site;
        for (auto& f : flows) by_site[f.x].push_back(&f);
        for (auto& [x, here] : by_site) {
            const CoinOp op = detail::settle_site(basis, t, n, here);
            schedule.place(t, x, op);
            for (auto* f : here) {
                f->coin = op.image(f->coin);
                f->x += CoinBasis::displacement(basis.direction(f->coin));
            }
        }
    }

    // Self-check with the full state simulator on each basis input.
    for (int c = 0; c < d; ++c) {
        std::vector<Complex> e(static_cast<std::size_t>(d));
        e[static_cast<std::size_t>(c)] = 1.0;
        if (transfer_fidelity(schedule, e) < 1.0 - 1e-12) {
            throw OracleDefect("oracle schedule fails basis input " + std::to_string(c) + " for d=" +
                               std::to_string(d) + ", n=" + std::to_string(n) + ", p=" + std::to_string(p));
        }
    }
    return schedule;
}

using PathCount = std::uint64_t;

namespace detail {

inline PathCount checked_mul(PathCount a, PathCount b) {
    PathCount out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw BudgetError("path count overflows 64 bits");
    return out;
}

inline PathCount checked_add(PathCount a, PathCount b) {
    PathCount out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw BudgetError("path count overflows 64 bits");
    return out;
}

// Exact C(n, k), zero outside 0 <= k <= n.
inline PathCount binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    PathCount result = 1;
    for (long i = 1; i <= k; ++i) {
        // result * (n - k + i) is divisible by i at every stage.
        const auto num = static_cast<PathCount>(n - k + i);
        const PathCount g = std::gcd(result, static_cast<PathCount>(i));
        result = checked_mul(result / g, num / (static_cast<PathCount>(i) / g));
    }
    return result;
}

}  // namespace detail

// N(n, p) = sum over n_s of C(n-2, n_s) C(n-2-n_s, (n-2-n_s+p)/2). Terms with
// a fractional or out-of-range second argument are zero.
inline PathCount count_paths_closed(int n, Position p) {
    const long len = n - 2;
    const long dist = std::labs(static_cast<long>(p));
    if (len < dist) return 0;
    PathCount total = 0;
    for (long ns = 0; ns <= len - dist; ++ns) {
        const long twice = len - ns + p;
        if (twice % 2 != 0) continue;
        total = detail::checked_add(total, detail::checked_mul(detail::binomial(len, ns),
                                                               detail::binomial(len - ns, twice / 2)));
    }
    return total;
}

inline constexpr int kEnumerationBudget = 22;

namespace detail {

// Net displacement histogram over every word in {l,s,r}^len, offset by len.
inline std::vector<PathCount> displacement_histogram(int len) {
    std::vector<PathCount> hist(static_cast<std::size_t>(2 * len + 1), 0);
    std::vector<int> digits(static_cast<std::size_t>(len), 0);  // 0 = l, 1 = s, 2 = r
    while (true) {
        int net = 0;
        for (int dgt : digits) net += dgt - 1;
        ++hist[static_cast<std::size_t>(net + len)];
        int i = 0;
        while (i < len && digits[static_cast<std::size_t>(i)] == 2) digits[static_cast<std::size_t>(i++)] = 0;
        if (i == len) break;
        ++digits[static_cast<std::size_t>(i)];
    }
    return hist;
}

}  // namespace detail

// Counts {l,s,r}^(n-2) words with #r - #l = p by listing them. Each word is
// split into two halves that are enumerated separately and paired, so the
// budget is 3^(n-2) words without 3^(n-2) iterations.
inline PathCount count_paths_enum(int n, Position p) {
    const int len = n - 2;
    if (len > kEnumerationBudget) {
        throw BudgetError("enumeration budget exceeded: n-2=" + std::to_string(len) + " > " +
                          std::to_string(kEnumerationBudget));
    }
    if (len < 0) return 0;
    const int left_len = len / 2;
    const int right_len = len - left_len;
    const auto left = detail::displacement_histogram(left_len);
    const auto right = detail::displacement_histogram(right_len);
    PathCount total = 0;
    for (int a = -left_len; a <= left_len; ++a) {
        const long b = p - a;
        if (b < -right_len || b > right_len) continue;
        total += left[static_cast<std::size_t>(a + left_len)] * right[static_cast<std::size_t>(b + right_len)];
    }
    return total;
}

// One member of the lazy-walk solution family: n_s = n-2-|p|-2 n_delta.
struct MoveCounts {
    long n_left;
    long n_stay;
    long n_right;
    long n_delta;
};

inline std::vector<MoveCounts> solution_family(int n, Position p) {
    std::vector<MoveCounts> out;
    const long len = n - 2;
    const long dist = std::labs(static_cast<long>(p));
    for (long nd = 0; len - dist - 2 * nd >= 0; ++nd) {
        const long ns = len - dist - 2 * nd;
        out.push_back({(len - ns - p) / 2, ns, (len - ns + p) / 2, nd});
    }
    return out;
}

}  // namespace qwalk
