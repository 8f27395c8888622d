#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qwalk/core.hpp"
#include "qwalk/harness.hpp"

namespace qwalk {
namespace {

using namespace std::complex_literals;

TEST(NewLocalized, BasisState) {
    const auto s = new_localized(3, 0, {1.0, 0.0, 0.0});
    EXPECT_EQ(s.amplitude(0, 0), Complex(1.0));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    EXPECT_EQ(s.step_count(), 0);
}

TEST(NewLocalized, UniformSuperposition) {
    const double a = 1.0 / std::sqrt(3.0);
    const auto s = new_localized(3, 0, {a, a, a});
    EXPECT_EQ(s.sites().size(), 1u);
    EXPECT_EQ(s.sites().at(0).size(), 3u);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(NewLocalized, TwoTermState) {
    const auto s = new_localized(4, 0, {0.6, 0.0, 0.0, 0.8i});
    EXPECT_EQ(s.amplitude(0, 0), Complex(0.6));
    EXPECT_EQ(s.amplitude(0, 3), Complex(0.8i));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(NewLocalized, Errors) {
    EXPECT_THROW(new_localized(3, 0, {1.0, 1.0, 0.0}), NormalizationError);
    EXPECT_THROW(new_localized(1, 0, {1.0}), DimensionError);
    EXPECT_THROW(new_localized(3, 0, {1.0, 0.0}), DimensionError);
}

TEST(Shift, LeftMover) {
    const auto s = shift(new_localized(3, 0, {1.0, 0.0, 0.0}));
    EXPECT_EQ(s.amplitude(-1, 0), Complex(1.0));
    EXPECT_EQ(s.support(), std::vector<Position>{-1});
}

TEST(Shift, SelfLoop) {
    const auto s = shift(new_localized(3, 0, {0.0, 1.0, 0.0}));
    EXPECT_EQ(s.amplitude(0, 1), Complex(1.0));
}

TEST(Shift, RightMover) {
    const auto s = shift(new_localized(4, 5, {0.0, 0.0, 0.0, 1.0}));
    EXPECT_EQ(s.amplitude(6, 3), Complex(1.0));
}

TEST(ApplyCoins, SwapOnBasisState) {
    const auto s = apply_coins(new_localized(3, 0, {1.0, 0.0, 0.0}), {{0, CoinOp::swap(3, 0, 2)}});
    EXPECT_EQ(s.amplitude(0, 2), Complex(1.0));
}

TEST(ApplyCoins, EmptyMapIsIdentity) {
    const auto in = new_localized(3, 1, {0.0, 0.0, 1.0});
    const auto out = apply_coins(in, CoinMap{});
    EXPECT_EQ(out.sites(), in.sites());
}

TEST(ApplyCoins, SwapReversesCoinVector) {
    const Complex alpha = 0.6, beta = 0.48i, gamma = 0.64;
    const auto out = apply_coins(new_localized(3, 0, {alpha, beta, gamma}), {{0, CoinOp::swap(3, 0, 2)}});
    EXPECT_EQ(out.amplitude(0, 0), gamma);
    EXPECT_EQ(out.amplitude(0, 1), beta);
    EXPECT_EQ(out.amplitude(0, 2), alpha);
}

TEST(ApplyCoins, DimensionMismatch) {
    EXPECT_THROW(apply_coins(new_localized(3, 0, {1.0, 0.0, 0.0}), {{0, CoinOp::swap(4, 0, 3)}}), DimensionError);
}

TEST(Step, FirstStepSplitsFlows) {
    const Complex alpha = 0.6, beta = 0.48i, gamma = 0.64;
    const auto out = step(new_localized(3, 0, {alpha, beta, gamma}), CoinMap{{0, CoinOp::swap(3, 0, 2)}});
    EXPECT_EQ(out.step_count(), 1);
    EXPECT_EQ(out.amplitude(-1, 0), gamma);
    EXPECT_EQ(out.amplitude(0, 1), beta);
    EXPECT_EQ(out.amplitude(1, 2), alpha);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
}

TEST(Step, QubitRightMover) {
    const auto out = step(new_localized(2, 0, {0.0, 1.0}), CoinMap{});
    EXPECT_EQ(out.amplitude(1, 1), Complex(1.0));
}

TEST(Step, SelfLoopStays) {
    const auto out = step(new_localized(4, 0, {0.0, 0.0, 1.0, 0.0}), CoinMap{});
    EXPECT_EQ(out.amplitude(0, 2), Complex(1.0));
}

TEST(Fidelity, Values) {
    const auto a = new_localized(3, 0, {1.0, 0.0, 0.0});
    const auto b = new_localized(3, 0, {0.0, 1.0, 0.0});
    const double h = 1.0 / std::sqrt(2.0);
    const auto c = new_localized(3, 0, {h, h, 0.0});
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(a, b), 0.0, 1e-12);
    EXPECT_NEAR(fidelity(c, a), 0.5, 1e-12);
    EXPECT_NEAR(fidelity(a, c), fidelity(c, a), 1e-15);
    EXPECT_THROW(fidelity(a, new_localized(2, 0, {1.0, 0.0})), DimensionError);
}

TEST(Fidelity, IgnoresGlobalPhase) {
    const auto a = new_localized(3, 2, {0.6, 0.0, 0.8});
    const auto b = new_localized(3, 2, {0.6i, 0.0, 0.8i});
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-12);
}

// Random coin map over the given sites, drawn from the whole family.
CoinMap random_coin_map(int d, Position lo, Position hi, Rng& rng) {
    const auto family = coin_family(d);
    std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
    CoinMap map;
    for (Position x = lo; x <= hi; ++x) map.emplace(x, family[pick(rng)]);
    return map;
}

TEST(CoreProperties, NormPreservedOverManySteps) {
    Rng rng(11);
    for (int d = 2; d <= 6; ++d) {
        auto state = new_localized(d, 0, random_unit_vector(static_cast<std::size_t>(d), rng));
        for (int t = 0; t < 120; ++t) {
            state = step(state, random_coin_map(d, -t - 1, t + 1, rng));
            ASSERT_NEAR(state.norm_squared(), 1.0, 1e-12) << "d=" << d << " step " << t;
        }
        EXPECT_EQ(state.step_count(), 120);
    }
}

TEST(CoreProperties, SupportGrowsAtMostOneSitePerStep) {
    Rng rng(12);
    for (int d = 2; d <= 5; ++d) {
        auto state = new_localized(d, 3, random_unit_vector(static_cast<std::size_t>(d), rng));
        for (int t = 1; t <= 40; ++t) {
            const auto before = state.support();
            state = step(state, random_coin_map(d, 3 - t, 3 + t, rng));
            const auto after = state.support();
            ASSERT_FALSE(after.empty());
            EXPECT_GE(after.front(), before.front() - 1);
            EXPECT_LE(after.back(), before.back() + 1);
            EXPECT_GE(after.front(), 3 - t);
            EXPECT_LE(after.back(), 3 + t);
        }
    }
}

WalkerState combine(Complex ca, const WalkerState& a, Complex cb, const WalkerState& b) {
    WalkerState::Sites sites;
    for (const auto* s : {&a, &b}) {
        for (const auto& [x, coins] : s->sites()) sites.try_emplace(x, coins.size());
    }
    for (auto& [x, coins] : sites) {
        for (int c = 0; c < a.dim(); ++c) coins[static_cast<std::size_t>(c)] = ca * a.amplitude(x, c) + cb * b.amplitude(x, c);
    }
    return WalkerState(a.dim(), std::move(sites), a.step_count());
}

TEST(CoreProperties, StepIsLinear) {
    Rng rng(13);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 5;
        const auto a = new_localized(d, 0, random_unit_vector(static_cast<std::size_t>(d), rng));
        auto b = new_localized(d, 1, random_unit_vector(static_cast<std::size_t>(d), rng));
        const Complex ca{g(rng), g(rng)}, cb{g(rng), g(rng)};
        const auto map = random_coin_map(d, -2, 3, rng);
        const auto lhs = step(combine(ca, a, cb, b), map);
        const auto rhs = combine(ca, step(a, map), cb, step(b, map));
        for (Position x = -3; x <= 4; ++x) {
            for (int c = 0; c < d; ++c) EXPECT_NEAR(std::abs(lhs.amplitude(x, c) - rhs.amplitude(x, c)), 0.0, 1e-12);
        }
    }
}

TEST(CoreProperties, ShiftIsPermutation) {
    Rng rng(14);
    for (int d = 2; d <= 6; ++d) {
        auto state = new_localized(d, 0, random_unit_vector(static_cast<std::size_t>(d), rng));
        for (int t = 0; t < 5; ++t) state = step(state, random_coin_map(d, -t, t, rng));
        const auto back = inverse_shift(shift(state));
        for (const auto& [x, coins] : state.sites()) {
            for (int c = 0; c < d; ++c) EXPECT_EQ(back.amplitude(x, c), coins[static_cast<std::size_t>(c)]);
        }
        EXPECT_NEAR(shift(state).norm_squared(), state.norm_squared(), 1e-15);
    }
}

}  // namespace
}  // namespace qwalk
