#pragma once

/**
 * @file kernels.hpp
 * @brief Integral-equation kernels for the exit and entry problems
 *
 * Every kernel has the form
 *
 *   K(u, x, z) = -e^{-r u} E[ H(X_u^x) I(X_u^x in region(z)) ]
 *
 * with H affine on its active region, so each evaluation reduces to a Gaussian
 * tail probability and a truncated first moment:
 *
 *   kind               H(y)                          region
 *   ExitLong           -(mu + r) y + mu theta        y >= z
 *   ExitLongWithCost   -(mu + r) y + mu theta + r c  y >= z
 *   ExitShort          -(mu + r) y + mu theta        y <= z
 *   EntryShort         -(mu + r) y + mu theta        y >= z
 *   EntryLong           (mu + r) y - mu theta        y <= min(z, b_exit(t + u))
 */

#include "ouspread/boundary.hpp"
#include "ouspread/ou_process.hpp"

namespace ouspread {

/// Selects the kernel. EntryLong refers to the solved long exit boundary, which must
/// outlive the KernelKind.
class KernelKind {
public:
    static KernelKind exit_long() { return KernelKind(KernelTag::ExitLong, 0.0, nullptr); }
    static KernelKind exit_short() { return KernelKind(KernelTag::ExitShort, 0.0, nullptr); }
    static KernelKind entry_short() { return KernelKind(KernelTag::EntryShort, 0.0, nullptr); }
    static KernelKind exit_long_with_cost(double cost);
    static KernelKind entry_long(const Boundary& exit_boundary);

    KernelTag tag() const noexcept { return tag_; }
    double cost() const noexcept { return cost_; }
    const Boundary* exit_boundary() const noexcept { return exit_; }

private:
    KernelKind(KernelTag tag, double cost, const Boundary* exit)
        : tag_(tag), cost_(cost), exit_(exit) {}

    KernelTag tag_;
    double cost_;
    const Boundary* exit_;
};

double h_exit_long(const OUParams& p, double x);
double h_exit_long_cost(const OUParams& p, double cost, double x);

/// ((mu + r) x - mu theta) when x < b_exit(t), else 0.
double h_entry_long(const OUParams& p, const Boundary& exit_boundary, double t, double x);

/// K for the given kind. t is the calendar anchor (used by EntryLong only); u > 0.
double kernel(const KernelKind& kind, const OUParams& p, double t, double u, double x, double z);

/// Same kernel with the u-dependent factors precomputed. exit_cap is b_exit(t + u) and is
/// only read for EntryLong.
double kernel(const KernelKind& kind, const OUParams& p, const StepLaw& law, double x, double z,
              double exit_cap);

/// Limit of the kernel integrand as u -> 0: -H(x) I(x in region(z)).
double kernel_point_mass(const KernelKind& kind, const OUParams& p, double t, double x, double z);

}  // namespace ouspread
