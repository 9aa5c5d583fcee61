#pragma once

#include <functional>
#include <limits>

namespace ouspread {

struct RootOptions {
    double tol = 1e-10;        ///< accepted |f(root)| is tol * scale
    double scale = 1.0;
    double initial_step = 1e-3;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    int max_expansions = 64;
    int max_iterations = 200;
};

struct RootResult {
    double root;
    double residual;  ///< f(root)
    int evaluations;
};

/// Brent's method on a bracket [a, b] with f(a) f(b) <= 0. Iterates down to machine
/// resolution of the bracket.
RootResult brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 const RootOptions& opts = {});

/// Expands a bracket geometrically around seed (steps initial_step * 2^i, clipped to
/// [lower, upper]) and then runs Brent. Throws RootNotBracketed after max_expansions.
RootResult root_find(const std::function<double(double)>& f, double seed,
                     const RootOptions& opts = {});

}  // namespace ouspread
