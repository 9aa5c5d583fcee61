#include "ouspread/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ouspread {

TimeGrid::TimeGrid(double T, std::size_t n_steps) : T_(T), n_steps_(n_steps), h_(T / static_cast<double>(n_steps)) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("grid horizon must be > 0");
    if (n_steps < 2) throw std::invalid_argument("grid needs at least 2 steps");
}

double TimeGrid::node(std::size_t k) const {
    if (k > n_steps_) throw std::out_of_range("grid index " + std::to_string(k) + " past the horizon");
    return k == n_steps_ ? T_ : static_cast<double>(k) * T_ / static_cast<double>(n_steps_);
}

std::size_t TimeGrid::locate(double t) const {
    if (!(t >= 0.0 && t <= T_))
        throw std::out_of_range("time " + std::to_string(t) + " outside [0, T]");
    if (t == T_) return n_steps_;
    auto k = static_cast<std::size_t>(std::floor(t / h_));
    k = std::min(k, n_steps_ - 1);
    // floor(t / h) can land one cell off when t sits on a node
    if (node(k) > t) --k;
    else if (k + 1 < n_steps_ && node(k + 1) <= t) ++k;
    return k;
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(k);
    return out;
}

double interpolation_weight(const TimeGrid& grid, std::size_t l, double tau) {
    const double T = grid.T();
    const double s0 = std::sqrt(T - grid.node(l));
    const double s1 = std::sqrt(T - grid.node(l + 1));
    return (s0 - std::sqrt(std::max(0.0, T - tau))) / (s0 - s1);
}

std::string_view to_string(KernelTag tag) {
    switch (tag) {
        case KernelTag::ExitLong: return "exit_long";
        case KernelTag::EntryLong: return "entry_long";
        case KernelTag::ExitShort: return "exit_short";
        case KernelTag::EntryShort: return "entry_short";
        case KernelTag::ExitLongWithCost: return "cost_exit";
    }
    return "unknown";
}

bool is_nonincreasing(KernelTag tag) noexcept {
    return tag == KernelTag::ExitLong || tag == KernelTag::ExitLongWithCost ||
           tag == KernelTag::EntryShort;
}

Boundary::Boundary(TimeGrid grid, std::vector<double> values, KernelTag tag, double cost)
    : grid_(grid), values_(std::move(values)), tag_(tag), cost_(cost) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("boundary has " + std::to_string(values_.size()) +
                                    " values for a grid of " + std::to_string(grid_.size()) +
                                    " nodes");
    if (cost_ != 0.0 && tag_ != KernelTag::ExitLongWithCost)
        throw std::invalid_argument("only the cost exit boundary carries a fee");
    if (!(cost_ >= 0.0)) throw std::invalid_argument("fee must be >= 0");
}

double Boundary::at(double t) const {
    const std::size_t k = grid_.locate(t);
    if (k == grid_.n_steps()) return values_.back();
    if (grid_.node(k) == t) return values_[k];
    const double w = interpolation_weight(grid_, k, t);
    return values_[k] + w * (values_[k + 1] - values_[k]);
}

std::optional<std::size_t> Boundary::monotonicity_violation(double slack) const {
    const bool down = is_nonincreasing(tag_);
    for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
        const double step = values_[k + 1] - values_[k];
        if (down ? step > slack : step < -slack) return k;
    }
    return std::nullopt;
}

}  // namespace ouspread
