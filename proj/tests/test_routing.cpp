#include <gtest/gtest.h>

#include <cmath>

#include "qwalk/harness.hpp"
#include "qwalk/routing.hpp"

namespace qwalk {
namespace {

std::vector<Complex> kron(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out;
    for (auto x : a) {
        for (auto y : b) out.push_back(x * y);
    }
    return out;
}

// sum_i c_i |i..i> with random normalized c.
std::vector<Complex> random_diagonal(int d, int m, Rng& rng) {
    const auto c = random_unit_vector(static_cast<std::size_t>(d), rng);
    std::vector<Complex> v(coin_space_size(d, m));
    for (int i = 0; i < d; ++i) v[joint_index(std::vector<int>(static_cast<std::size_t>(m), i), d)] = c[static_cast<std::size_t>(i)];
    return v;
}

TEST(JointIndex, AxisZeroMostSignificant) {
    EXPECT_EQ(joint_index(std::vector<int>{1, 2}, 3), 5u);
    EXPECT_EQ(split_index(5, 3, 2), (std::vector<int>{1, 2}));
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(joint_index(split_index(i, 4, 3), 4), i);
}

// Swap(0,3) on both axes at the origin sends |0,0> to |3,3> and moves right twice.
TEST(RouteStep, SwapOnBothAxes) {
    Schedule a(4, 1, 1);
    a.place(1, 0, CoinOp::swap(4, 0, 3));
    const RoutingPlan plan({1, 1}, {a, a});
    std::vector<Complex> in(16);
    in[0] = 1.0;
    const auto s0 = MultiWalkerState::localized(2, 4, {0, 0}, in);
    const auto s1 = route_step(s0, plan, 1);
    EXPECT_EQ(s1.step_count(), 1);
    EXPECT_EQ(s1.sites().size(), 1u);
    EXPECT_NEAR(std::abs(s1.amplitude({1, 1}, std::vector<int>{3, 3})), 1.0, 1e-15);
}

TEST(RouteStep, IdentityPlanLeavesStayCoins) {
    const RoutingPlan plan({1, 1}, {Schedule(4, 1, 1), Schedule(4, 1, 1)});
    std::vector<Complex> in(16);
    in[joint_index(std::vector<int>{1, 2}, 4)] = 1.0;
    const auto s1 = route_step(MultiWalkerState::localized(2, 4, {0, 0}, in), plan, 1);
    EXPECT_NEAR(std::abs(s1.amplitude({0, 0}, std::vector<int>{1, 2})), 1.0, 1e-15);
}

TEST(RouteStep, SingleAxisMatchesCoreStep) {
    const auto sched = compile(4, 6, -2);
    const RoutingPlan plan({-2}, {sched});
    Rng rng(11);
    const auto v = random_unit_vector(4, rng);
    auto joint = MultiWalkerState::localized(1, 4, {0}, v);
    auto single = new_localized(4, 0, v);
    for (int k = 1; k <= 6; ++k) {
        joint = route_step(joint, plan, k);
        single = step(single, sched);
        for (const auto& [x, coins] : single.sites()) {
            for (int c = 0; c < 4; ++c) {
                EXPECT_NEAR(std::abs(joint.amplitude({x}, std::vector<int>{c}) - coins[static_cast<std::size_t>(c)]), 0.0, 1e-15);
            }
        }
    }
}

TEST(Route, QuquartPairToOppositeCorners) {
    const auto plan = plan_route(4, {3, -3});
    EXPECT_EQ(plan.steps(), 6);
    Rng rng(5);
    for (int draw = 0; draw < 10; ++draw) {
        const auto v = random_diagonal(4, 2, rng);
        EXPECT_NEAR(entanglement_check(route(plan, v), {3, -3}, v), 1.0, 1e-10);
    }
}

TEST(Route, SeparableInputsFactorizeAtEveryStep) {
    const auto plan = plan_route(3, {2, -1}, 5);
    Rng rng(2);
    const auto a = random_unit_vector(3, rng);
    const auto b = random_unit_vector(3, rng);
    auto joint = MultiWalkerState::localized(2, 3, {0, 0}, kron(a, b));
    auto wa = new_localized(3, 0, a);
    auto wb = new_localized(3, 0, b);
    for (int k = 1; k <= 5; ++k) {
        joint = route_step(joint, plan, k);
        wa = step(wa, plan.axis(0));
        wb = step(wb, plan.axis(1));
        double mass = 0.0;
        for (const auto& [xa, ca] : wa.sites()) {
            for (const auto& [xb, cb] : wb.sites()) {
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) {
                        const Complex expected = ca[static_cast<std::size_t>(i)] * cb[static_cast<std::size_t>(j)];
                        EXPECT_NEAR(std::abs(joint.amplitude({xa, xb}, std::vector<int>{i, j}) - expected), 0.0, 1e-12);
                        mass += std::norm(expected);
                    }
                }
            }
        }
        EXPECT_NEAR(mass, 1.0, 1e-12);
        EXPECT_NEAR(joint.norm_squared(), 1.0, 1e-12);
    }
}

TEST(Route, EntangledRandomInputs) {
    Rng rng(8);
    for (int trial = 0; trial < 12; ++trial) {
        const auto v = random_unit_vector(27, rng);
        const auto out = route(3, {2, -1, 3}, std::nullopt, v);
        EXPECT_NEAR(entanglement_check(out, {2, -1, 3}, v), 1.0, 1e-10);
    }
}

TEST(Route, GhzKeepsPurity) {
    std::vector<Complex> ghz(9);
    for (int i = 0; i < 3; ++i) ghz[joint_index(std::vector<int>{i, i}, 3)] = 1.0 / std::sqrt(3.0);
    const auto plan = plan_route(3, {2, -2}, 5);
    const auto out = route(plan, ghz);
    EXPECT_NEAR(entanglement_check(out, {2, -2}, ghz), 1.0, 1e-10);
    const auto delivered = out.coin_state_at({2, -2});
    for (int axis = 0; axis < 2; ++axis) {
        EXPECT_NEAR(reduced_purity(ghz, 3, 2, axis), 1.0 / 3.0, 1e-12);
        EXPECT_NEAR(reduced_purity(delivered, 3, 2, axis), 1.0 / 3.0, 1e-12);
    }
}

TEST(Route, WrongTargetHasNoOverlap) {
    std::vector<Complex> v(16);
    v[0] = v[15] = 1.0 / std::sqrt(2.0);
    const auto plan = plan_route(4, {3, -3});
    const auto out = route(plan, v);
    EXPECT_EQ(entanglement_check(out, {3, 3}, v), 0.0);
    EXPECT_EQ(entanglement_check(out, {0, 0}, v), 0.0);
}

TEST(Route, HalfwayStateIsNotDelivered) {
    std::vector<Complex> v(16);
    v[0] = v[15] = 1.0 / std::sqrt(2.0);
    const auto plan = plan_route(4, {3, -3});
    auto state = MultiWalkerState::localized(2, 4, {0, 0}, v);
    for (int k = 1; k <= 3; ++k) state = route_step(state, plan, k);
    EXPECT_LT(entanglement_check(state, {3, -3}, v), 1e-12);
}

TEST(Route, NormPreservedEachStep) {
    Rng rng(4);
    const auto v = random_unit_vector(64, rng);
    const auto plan = plan_route(4, {-2, 1, 4});
    route(plan, v, [](const MultiWalkerState& s) { EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12); });
}

TEST(SpecialSettings, ScalesWithAxes) {
    for (int d : {3, 4}) {
        for (int m = 1; m <= 3; ++m) {
            PositionVec same(static_cast<std::size_t>(m), 2);
            const int n_same = 8;  // even, same parity as 2
            EXPECT_EQ(plan_route(d, same, n_same).special_settings(), m * (2 * d - 1));
            EXPECT_EQ(plan_route(d, same, n_same + 1).special_settings(), m * (2 * d + 1));
        }
    }
}

TEST(PlanRoute, CommonStepsAndErrors) {
    EXPECT_EQ(common_steps(3, {1, -4}), 6);
    EXPECT_EQ(common_steps(2, {2, -4}), 6);
    EXPECT_EQ(common_steps(2, {1, 3}), 5);
    EXPECT_THROW(common_steps(2, {1, 2}), FeasibilityError);
    EXPECT_THROW(plan_route(3, {1, 0}), UnsupportedTargetError);
    EXPECT_THROW(plan_route(3, {}), DimensionError);
    try {
        plan_route(3, {1, 5}, 5);
        FAIL();
    } catch (const FeasibilityError& e) {
        EXPECT_NE(std::string(e.what()).find("axis 1"), std::string::npos);
    }
}

TEST(RouteStep, Errors) {
    const auto plan = plan_route(3, {1, 1}, 3);
    std::vector<Complex> v(9);
    v[0] = 1.0;
    auto s = MultiWalkerState::localized(2, 3, {0, 0}, v);
    EXPECT_THROW(route_step(s, plan, 2), StepError);
    EXPECT_THROW(route_step(s, plan, 0), StepError);
    for (int k = 1; k <= 3; ++k) s = route_step(s, plan, k);
    EXPECT_THROW(route_step(s, plan, 4), StepError);
    EXPECT_THROW(MultiWalkerState::localized(2, 3, {0, 0}, std::vector<Complex>(8, 0.3)), DimensionError);
    std::vector<Complex> unnormalized(9, 1.0);
    EXPECT_THROW(MultiWalkerState::localized(2, 3, {0, 0}, unnormalized), NormalizationError);
    const auto other = MultiWalkerState::localized(1, 3, {0}, std::vector<Complex>{1.0, 0.0, 0.0});
    EXPECT_THROW(route_step(other, plan, 1), DimensionError);
}

TEST(ReducedPurity, ProductAndMaximallyEntangled) {
    Rng rng(1);
    const auto a = random_unit_vector(4, rng);
    const auto b = random_unit_vector(4, rng);
    EXPECT_NEAR(reduced_purity(kron(a, b), 4, 2, 0), 1.0, 1e-12);
    EXPECT_NEAR(reduced_purity(kron(a, b), 4, 2, 1), 1.0, 1e-12);
    std::vector<Complex> bell(16);
    for (int i = 0; i < 4; ++i) bell[static_cast<std::size_t>(5 * i)] = 0.5;
    EXPECT_NEAR(reduced_purity(bell, 4, 2, 1), 0.25, 1e-12);
}

}  // namespace
}  // namespace qwalk
