#include "ouspread/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ouspread {

KernelKind KernelKind::exit_long_with_cost(double cost) {
    if (!(cost >= 0.0) || !std::isfinite(cost)) throw std::invalid_argument("fee must be >= 0");
    return KernelKind(KernelTag::ExitLongWithCost, cost, nullptr);
}

KernelKind KernelKind::entry_long(const Boundary& exit_boundary) {
    if (exit_boundary.tag() != KernelTag::ExitLong)
        throw std::invalid_argument("entry kernel needs a solved exit_long boundary");
    return KernelKind(KernelTag::EntryLong, 0.0, &exit_boundary);
}

double h_exit_long(const OUParams& p, double x) { return -(p.mu() + p.r()) * x + p.mu() * p.theta(); }

double h_exit_long_cost(const OUParams& p, double cost, double x) {
    return -(p.mu() + p.r()) * x + p.mu() * p.theta() + p.r() * cost;
}

double h_entry_long(const OUParams& p, const Boundary& exit_boundary, double t, double x) {
    if (!(t >= 0.0 && t <= p.T())) throw std::out_of_range("time outside [0, T]");
    return x < exit_boundary.at(t) ? -h_exit_long(p, x) : 0.0;
}

double kernel(const KernelKind& kind, const OUParams& p, const StepLaw& law, double x, double z,
              double exit_cap) {
    const TransitionLaw tl = law.law(x);
    const double slope = p.mu() + p.r();
    const double level = p.mu() * p.theta();
    switch (kind.tag()) {
        case KernelTag::ExitLong: {
            const auto tm = truncated_moments(tl, z, Side::Above);
            return -law.discount * (-slope * tm.partial_mean + level * tm.prob);
        }
        case KernelTag::ExitLongWithCost: {
            const auto tm = truncated_moments(tl, z, Side::Above);
            return -law.discount *
                   (-slope * tm.partial_mean + level * tm.prob + p.r() * kind.cost() * tm.prob);
        }
        case KernelTag::EntryShort: {
            const auto tm = truncated_moments(tl, z, Side::Above);
            return -law.discount * (-slope * tm.partial_mean + level * tm.prob);
        }
        case KernelTag::ExitShort: {
            const auto tm = truncated_moments(tl, z, Side::Below);
            return -law.discount * (-slope * tm.partial_mean + level * tm.prob);
        }
        case KernelTag::EntryLong: {
            const auto tm = truncated_moments(tl, std::min(z, exit_cap), Side::Below);
            return -law.discount * (slope * tm.partial_mean - level * tm.prob);
        }
    }
    return 0.0;
}

double kernel(const KernelKind& kind, const OUParams& p, double t, double u, double x, double z) {
    if (!(u > 0.0)) throw std::invalid_argument("kernel needs u > 0");
    double cap = 0.0;
    if (kind.tag() == KernelTag::EntryLong) {
        if (!(t >= 0.0 && t + u <= p.T() * (1.0 + 1e-14)))
            throw std::out_of_range("t + u outside the exit boundary's span");
        cap = kind.exit_boundary()->at(std::min(t + u, kind.exit_boundary()->grid().T()));
    }
    return kernel(kind, p, step_law(p, u), x, z, cap);
}

double kernel_point_mass(const KernelKind& kind, const OUParams& p, double t, double x, double z) {
    switch (kind.tag()) {
        case KernelTag::ExitLong:
        case KernelTag::EntryShort:
            return x >= z ? -h_exit_long(p, x) : 0.0;
        case KernelTag::ExitLongWithCost:
            return x >= z ? -h_exit_long_cost(p, kind.cost(), x) : 0.0;
        case KernelTag::ExitShort:
            return x <= z ? -h_exit_long(p, x) : 0.0;
        case KernelTag::EntryLong:
            return x <= z ? -h_entry_long(p, *kind.exit_boundary(), t, x) : 0.0;
    }
    return 0.0;
}

}  // namespace ouspread
