#pragma once

/**
 * @file lattice.hpp
 * @brief Bermudan dynamic-programming lattice used as an independent oracle
 *
 * Backward induction on a uniform (time, spread) mesh:
 *
 *   V_n(x) = opt(payoff_n(x), e^{-r dt} E[V_{n+1}(X_dt^x)])
 *
 * where opt is max, or min for the short exit. The expectation integrates the exact
 * Gaussian one-step law with Gauss-Legendre nodes spread over +-8 step deviations;
 * V_{n+1} is read by 4-point cubic interpolation, extrapolated past the mesh ends.
 * Entry stages take the matching exit stage's slices as their payoff.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "ouspread/boundary_solver.hpp"
#include "ouspread/ou_process.hpp"

namespace ouspread {

struct GaussRule {
    std::vector<double> nodes;  ///< ascending, in (-1, 1)
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(std::size_t n);

struct LatticeSpec {
    std::size_t n_time = 2000;
    std::size_t n_space = 400;
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t quad_order = 64;

    /// Mesh over theta +- width stationary deviations.
    static LatticeSpec covering(const OUParams& p, std::size_t n_time, std::size_t n_space,
                                double width = 8.0);

    double dx() const { return (x_max - x_min) / static_cast<double>(n_space - 1); }
    double x(std::size_t i) const;
    void validate() const;
};

/// Where the lattice switches between stopping and continuing at one time step: the
/// outermost node of the contiguous stopping run and its continuing neighbour.
struct FrontierCell {
    double stop;
    double cont;
};

struct DpResult {
    LatticeSpec spec;
    Role stage;
    double fee = 0.0;
    double horizon = 1.0;
    std::vector<double> xs;
    std::vector<double> value0;                        ///< slice at t = 0
    std::vector<std::optional<FrontierCell>> frontier; ///< per step n = 0..n_time-1
    std::vector<std::vector<double>> slices;           ///< all slices, kept on request

    double time(std::size_t n) const;
    /// Linear interpolation of the t = 0 slice.
    double value_at(double x) const;
};

struct DpOptions {
    bool keep_slices = false;
    /// When > 0, rerun on a doubled spatial range with the same cell size and throw
    /// BoundsTooTight if mid-domain values move by more than this.
    double bounds_tol = 0.0;
};

/// Stages: ExitLong, ExitShort, CostExit (payoff x - fee), EntryLong, EntryShort.
DpResult dp_value(const OUParams& p, const LatticeSpec& spec, Role stage, double fee = 0.0,
                  const DpOptions& opts = {});

}  // namespace ouspread
