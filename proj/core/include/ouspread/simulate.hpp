#pragma once

/**
 * @file simulate.hpp
 * @brief Monte Carlo execution of solved threshold rules
 *
 * Paths are drawn from the exact OU transition on a uniform step no wider than the
 * boundary grid step. A boundary counts as hit at the first simulation node where the
 * path is on its stopping side, or, with the bridge test on, when a Brownian bridge
 * between consecutive nodes crosses it; the rule then settles at the boundary level, as
 * a continuously monitored path would. Per-path payoffs:
 *
 *   long-short   enter at X <= b^{1,E}, exit at X >= b^{1,L}:  e^{-r zeta} X_zeta - e^{-r tau} X_tau
 *   short-long   enter at X >= b^{2,E}, exit at X <= b^{2,L}:  e^{-r tau} X_tau - e^{-r zeta} X_zeta
 *   chooser      sell at the first X >= b^{1,L}, buy at the first X <= b^{2,L}; whichever
 *                comes first is the entry
 *   cost-exit    already long, exit at X >= b^{1,L,c}:          e^{-r zeta} (X_zeta - c)
 *
 * Unfired rules fire at T. Paths are seeded per index from the master seed, so the
 * report does not depend on the number of worker threads.
 */

#include <cstddef>
#include <cstdint>

#include "ouspread/boundary_solver.hpp"

namespace ouspread {

struct SimReport {
    std::size_t n_paths = 0;
    double mean_payoff = 0.0;
    double std_error = 0.0;       ///< sample standard deviation / sqrt(n_paths)
    double entry_rate = 0.0;      ///< share of paths whose entry rule fired before T
    double mean_entry_time = 0.0; ///< over all paths, T for paths that never entered
    double mean_exit_time = 0.0;
};

struct SimOptions {
    double x0 = 0.0;
    double t0 = 0.0;
    std::size_t substeps = 16;  ///< simulation steps per boundary grid step
    unsigned threads = 0;      ///< 0 picks the hardware concurrency
    /// Detect crossings between nodes. Off, only the nodes are checked and the rule
    /// settles at the path value, which biases the mean by O(sqrt(step)).
    bool bridge = true;
};

SimReport simulate_strategy(const StrategySolution& sol, std::size_t n_paths, std::uint64_t seed,
                            const SimOptions& opts = {});

/// Solver value the simulation mean estimates: V^{1,E}, V^{2,E}, V^0 or V^{1,L,c} at (t0, x0).
double simulated_target(const StrategySolution& sol, double t0, double x0);

}  // namespace ouspread
