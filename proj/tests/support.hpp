#pragma once

#include <map>
#include <tuple>

#include "ouspread/boundary_solver.hpp"

namespace ouspread::testing {

/// Solutions at the reference parameters, solved once per test binary.
inline const StrategySolution& reference_solution(Strategy s, std::size_t steps = 500,
                                                  double fee = 0.0) {
    static std::map<std::tuple<Strategy, std::size_t, double>, StrategySolution> cache;
    const auto key = std::make_tuple(s, steps, fee);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const auto p = OUParams::reference();
        it = cache.emplace(key, solve_strategy(p, TimeGrid(p.T(), steps), s, fee)).first;
    }
    return it->second;
}

}  // namespace ouspread::testing
