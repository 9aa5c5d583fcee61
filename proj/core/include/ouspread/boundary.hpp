#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ouspread {

/// Uniform grid t_k = k h on [0, T], k = 0..n_steps. The last node is exactly T.
class TimeGrid {
public:
    TimeGrid(double T, std::size_t n_steps);

    double T() const noexcept { return T_; }
    double h() const noexcept { return h_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t size() const noexcept { return n_steps_ + 1; }

    double node(std::size_t k) const;

    /// Index k with t_k <= t < t_{k+1}; returns n_steps for t == T.
    std::size_t locate(double t) const;

    std::vector<double> nodes() const;

    bool operator==(const TimeGrid& other) const noexcept {
        return T_ == other.T_ && n_steps_ == other.n_steps_;
    }

private:
    double T_;
    std::size_t n_steps_;
    double h_;
};

/// Weight of node l+1 at calendar time tau in [t_l, t_{l+1}] when a curve is interpolated
/// linearly in sqrt(T - t). Boundaries behave like sqrt(T - t) near the horizon.
double interpolation_weight(const TimeGrid& grid, std::size_t l, double tau);

enum class KernelTag { ExitLong, EntryLong, ExitShort, EntryShort, ExitLongWithCost };

std::string_view to_string(KernelTag tag);

/// ExitLong, ExitLongWithCost and EntryShort boundaries fall in t; the others rise.
bool is_nonincreasing(KernelTag tag) noexcept;

/// A solved free boundary sampled on a TimeGrid.
class Boundary {
public:
    /// values.size() must equal grid.size(); values.back() is taken as the terminal value.
    Boundary(TimeGrid grid, std::vector<double> values, KernelTag tag, double cost = 0.0);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    double terminal() const noexcept { return values_.back(); }
    KernelTag tag() const noexcept { return tag_; }
    double cost() const noexcept { return cost_; }

    /// Interpolation between nodes, linear in sqrt(T - t). Throws outside [0, T].
    double at(double t) const;

    /// First index k where values[k] -> values[k+1] moves the wrong way by more than slack.
    std::optional<std::size_t> monotonicity_violation(double slack = 1e-12) const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
    KernelTag tag_;
    double cost_;
};

}  // namespace ouspread
