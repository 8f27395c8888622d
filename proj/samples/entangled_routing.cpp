// Delivers a maximally entangled pair of ququarts from (0, 0) to (3, -3).

#include <cmath>
#include <iostream>
#include <vector>

#include "qwalk/routing.hpp"

int main() {
    constexpr int d = 4;
    const qwalk::PositionVec targets{3, -3};

    std::vector<qwalk::Complex> bell(qwalk::coin_space_size(d, 2));
    for (int i = 0; i < d; ++i) bell[static_cast<std::size_t>(i * d + i)] = 1.0 / std::sqrt(double(d));

    const auto plan = qwalk::plan_route(d, targets);
    const auto out = qwalk::route(plan, bell);

    const auto delivered = out.coin_state_at(targets);
    std::cout << "steps: " << plan.steps() << ", special settings: " << plan.special_settings() << '\n'
              << "fidelity: " << qwalk::entanglement_check(out, targets, bell) << '\n'
              << "reduced purity before/after: " << qwalk::reduced_purity(bell, d, 2, 0) << " / "
              << qwalk::reduced_purity(delivered, d, 2, 0) << '\n';
}
