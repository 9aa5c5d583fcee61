#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ouspread/boundary_solver.hpp"

namespace ouspread {

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckResult {
    std::string name;
    CheckStatus status;
    double value;  ///< measured quantity
    double limit;  ///< threshold it is compared against
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    std::string json() const;
};

struct ValidateOptions {
    std::size_t lattice_time = 2000;
    std::size_t lattice_space = 400;
    double oracle_tol = 5e-3;     ///< lattice vs integral values, mid 60% of the mesh
    double frontier_cells = 2.0;
    double smooth_fit_tol = 0.05;
    double smooth_fit_step = 1e-4;
    std::size_t paths = 20000;
    std::uint64_t seed = 42;
    std::size_t substeps = 16;
    double sim_sigmas = 3.0;
    double symmetry_tol = 1e-8;
};

/// Terminal values, monotonicity, ordering, theta-symmetry, lattice agreement, smooth fit
/// and simulation consistency for every boundary held by `sol`.
ValidationReport validate_solution(const StrategySolution& sol, const ValidateOptions& opts = {});

/// b(T) each role must take: mu theta / (mu + r), or (mu theta + r c) / (mu + r) with a fee.
double terminal_value(const OUParams& p, Role role, double fee = 0.0);

}  // namespace ouspread
