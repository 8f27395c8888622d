// Moves an arbitrary qutrit from site 0 to site 2 in four steps and prints the
// state after every step.

#include <cmath>
#include <complex>
#include <iostream>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/io.hpp"
#include "qwalk/schedule.hpp"

int main() {
    using namespace std::complex_literals;
    const std::vector<qwalk::Complex> coin{0.6, 0.48i, 0.64};

    const auto schedule = qwalk::compile_qudit(3, 4, 2);
    std::cout << "schedule (" << qwalk::special_count(schedule) << " special coins):\n";
    for (const auto& [cell, op] : schedule.entries()) {
        std::cout << "  step " << cell.step << ", site " << cell.x << ": " << op.label() << '\n';
    }

    auto state = qwalk::new_localized(3, 0, coin);
    std::cout << qwalk::io::to_json(state).dump() << '\n';
    for (int t = 0; t < schedule.steps(); ++t) {
        state = qwalk::step(state, schedule);
        std::cout << qwalk::io::to_json(state).dump() << '\n';
    }
    std::cout << "fidelity: " << qwalk::fidelity(state, qwalk::new_localized(3, 2, coin)) << '\n';
}
