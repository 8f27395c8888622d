#pragma once

// Coin operators for lackadaisical walks on the line.
//
// Three families are used by every transfer schedule:
//   Identity            |m> -> |m>
//   IncrementPower(k)   |m> -> |(m + k) mod d>      (generalized Pauli X^k)
//   Swap(i, j)          |i> <-> |j>, all other basis states fixed
//
// Operators are kept symbolic. Each one is a permutation of the coin basis, so
// applying it to a site's coin subvector is an index permutation; realize()
// builds the dense unitary for checks that want a matrix.

#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {

using Complex = std::complex<double>;

// Motion selected by a coin index: 0 moves left, d-1 moves right, anything in
// between is a self-loop.
enum class Direction { left, stay, right };

// Basis labelling shared by every walk: index 0 is the left mover, indices
// 1..d-2 are the lambda = d-2 self-loops, index d-1 is the right mover.
struct CoinBasis {
    int d;

    explicit CoinBasis(int dim) : d(dim) {
        if (dim < 2) throw DimensionError("coin dimension must be >= 2, got " + std::to_string(dim));
    }

    static constexpr int left_index() { return 0; }
    int right_index() const { return d - 1; }
    int lambda() const { return d - 2; }
    bool is_stay(int coin) const { return coin > 0 && coin < d - 1; }

    Direction direction(int coin) const {
        if (coin == 0) return Direction::left;
        if (coin == d - 1) return Direction::right;
        return Direction::stay;
    }

    static int displacement(Direction dir) {
        switch (dir) {
            case Direction::left: return -1;
            case Direction::right: return 1;
            default: return 0;
        }
    }
};

inline char direction_letter(Direction dir) {
    switch (dir) {
        case Direction::left: return 'l';
        case Direction::right: return 'r';
        default: return 's';
    }
}

struct IdentityCoin {
    friend bool operator==(const IdentityCoin&, const IdentityCoin&) = default;
};

struct IncrementCoin {
    int k;
    friend bool operator==(const IncrementCoin&, const IncrementCoin&) = default;
};

struct SwapCoin {
    int i;
    int j;
    friend bool operator==(const SwapCoin&, const SwapCoin&) = default;
};

class CoinOp {
public:
    using Variant = std::variant<IdentityCoin, IncrementCoin, SwapCoin>;

    static CoinOp identity(int d) { return CoinOp(CoinBasis(d).d, IdentityCoin{}); }

    static CoinOp increment(int d, int k) {
        CoinBasis basis(d);
        if (k < 1 || k > d - 1) {
            throw DimensionError("increment power must lie in 1.." + std::to_string(d - 1) + ", got " +
                                 std::to_string(k));
        }
        return CoinOp(basis.d, IncrementCoin{k});
    }

    static CoinOp swap(int d, int i, int j) {
        CoinBasis basis(d);
        if (i < 0 || i >= d || j < 0 || j >= d) {
            throw DimensionError("swap index out of range for d=" + std::to_string(d));
        }
        if (i == j) throw DimensionError("swap indices must differ, got " + std::to_string(i) + " twice");
        // Canonical order so that Swap(2,1) and Swap(1,2) compare equal.
        if (i > j) std::swap(i, j);
        return CoinOp(basis.d, SwapCoin{i, j});
    }

    int dim() const { return d_; }
    const Variant& variant() const { return op_; }

    bool is_identity() const { return std::holds_alternative<IdentityCoin>(op_); }

    // Basis image of |coin>.
    int image(int coin) const {
        if (const auto* inc = std::get_if<IncrementCoin>(&op_)) return (coin + inc->k) % d_;
        if (const auto* sw = std::get_if<SwapCoin>(&op_)) {
            if (coin == sw->i) return sw->j;
            if (coin == sw->j) return sw->i;
        }
        return coin;
    }

    std::vector<int> permutation() const {
        std::vector<int> perm(static_cast<std::size_t>(d_));
        for (int c = 0; c < d_; ++c) perm[static_cast<std::size_t>(c)] = image(c);
        return perm;
    }

    // out[image(c)] = in[c]; identical to multiplying by realize().
    void apply(std::span<const Complex> in, std::span<Complex> out) const {
        if (static_cast<int>(in.size()) != d_ || static_cast<int>(out.size()) != d_) {
            throw DimensionError("coin subvector length does not match d=" + std::to_string(d_));
        }
        for (int c = 0; c < d_; ++c) out[static_cast<std::size_t>(image(c))] = in[static_cast<std::size_t>(c)];
    }

    std::string label() const {
        if (const auto* inc = std::get_if<IncrementCoin>(&op_)) {
            return inc->k == 1 ? "X" : "X^" + std::to_string(inc->k);
        }
        if (const auto* sw = std::get_if<SwapCoin>(&op_)) {
            return "X_" + std::to_string(sw->i) + "<->" + std::to_string(sw->j);
        }
        return "I";
    }

    friend bool operator==(const CoinOp&, const CoinOp&) = default;

private:
    CoinOp(int d, Variant op) : d_(d), op_(op) {}

    int d_;
    Variant op_;
};

// Dense d x d unitary of the operator: column c holds the basis image of |c>.
inline Eigen::MatrixXcd realize(const CoinOp& op) {
    const int d = op.dim();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
    for (int c = 0; c < d; ++c) u(op.image(c), c) = 1.0;
    return u;
}

// Non-identity coins are the "special" settings counted by every schedule.
inline bool is_special(const CoinOp& op) { return !op.is_identity(); }

// Same action on the coin basis. Differs from == only at d = 2, where
// Swap(0,1) and X are the same operator.
inline bool same_action(const CoinOp& a, const CoinOp& b) {
    return a.dim() == b.dim() && a.permutation() == b.permutation();
}

// Finds the family member realizing a permutation, if there is one.
inline std::optional<CoinOp> op_from_permutation(std::span<const int> perm) {
    const int d = static_cast<int>(perm.size());
    std::vector<int> moved;
    for (int c = 0; c < d; ++c) {
        if (perm[static_cast<std::size_t>(c)] != c) moved.push_back(c);
    }
    if (moved.empty()) return CoinOp::identity(d);

    const int k = ((perm[0] % d) + d) % d;
    bool is_increment = k != 0;
    for (int c = 0; c < d && is_increment; ++c) {
        is_increment = perm[static_cast<std::size_t>(c)] == (c + k) % d;
    }
    // At d = 2 the increment and the swap coincide; prefer the increment.
    if (is_increment) return CoinOp::increment(d, k);

    if (moved.size() == 2 && perm[static_cast<std::size_t>(moved[0])] == moved[1] &&
        perm[static_cast<std::size_t>(moved[1])] == moved[0]) {
        return CoinOp::swap(d, moved[0], moved[1]);
    }
    return std::nullopt;
}

// Applies `first`, then `second`. nullopt when the product leaves the family.
inline std::optional<CoinOp> compose(const CoinOp& first, const CoinOp& second) {
    if (first.dim() != second.dim()) throw DimensionError("cannot compose coins of different dimension");
    std::vector<int> perm(static_cast<std::size_t>(first.dim()));
    for (int c = 0; c < first.dim(); ++c) perm[static_cast<std::size_t>(c)] = second.image(first.image(c));
    return op_from_permutation(perm);
}

// Direction change a coin operator produces on one basis state: the motion
// label before and after the flip.
struct DirectionChange {
    Direction before;
    Direction after;
    int from;
    int to;
};

inline DirectionChange classify_transition(const CoinOp& op, int coin) {
    const CoinBasis basis(op.dim());
    const int to = op.image(coin);
    return {basis.direction(coin), basis.direction(to), coin, to};
}

// Every candidate operator of the family for dimension d, identity first.
inline std::vector<CoinOp> coin_family(int d) {
    std::vector<CoinOp> ops{CoinOp::identity(d)};
    for (int k = 1; k < d; ++k) ops.push_back(CoinOp::increment(d, k));
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) ops.push_back(CoinOp::swap(d, i, j));
    }
    return ops;
}

}  // namespace qwalk
