#pragma once

/**
 * @file boundary_solver.hpp
 * @brief Backward recursion for the free-boundary integral equations
 *
 * Each boundary b solves an equation of the form
 *
 *   exit:   b(t) = e^{-r(T-t)} (m(T-t, b(t)) - c) + int_0^{T-t} K(u, b(t), b(t+u)) du
 *   entry:  G(t, b(t))                            = int_0^{T-t} K(u, b(t), b(t+u)) du
 *
 * On the grid t_k = k h the integral only involves b on [t_k, T], so the nodes are
 * solved from k = N-1 down to 0 with b(T) fixed at its analytic value, each node
 * being a scalar root search seeded at b(t_{k+1}).
 *
 * Two rules discretize the integral. RightRectangle is h sum_{l=k}^{N-1} K(t_{l+1}-t_k, .,
 * b(t_{l+1})). GaussSqrt applies 8-point Gauss-Legendre on every sub-interval
 * [t_l, t_{l+1}], substitutes u = s^2 on the first one, and interpolates b linearly
 * in sqrt(T - t) inside each sub-interval; it stays monotone up to the horizon where
 * the rectangle rule leaves a spurious dip at t_{N-2}.
 */

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ouspread/boundary.hpp"
#include "ouspread/kernels.hpp"
#include "ouspread/ou_process.hpp"

namespace ouspread {

/// What the value equals at t = T.
enum class TerminalPayoff { Spread, SpreadLessFee, Zero };

enum class QuadratureRule { GaussSqrt, RightRectangle };

/// Discretized integral representation
///   V(t, x) = e^{-r(T-t)} payoff(m(T-t, x)) + int_0^{T-t} K(u, x, b(t+u)) du
/// for one kernel kind on one grid. u-dependent factors are cached on construction.
class IntegralRepresentation {
public:
    IntegralRepresentation(const OUParams& p, const TimeGrid& grid, KernelKind kind,
                           TerminalPayoff payoff, QuadratureRule rule = QuadratureRule::GaussSqrt);

    const OUParams& params() const noexcept { return p_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    const KernelKind& kind() const noexcept { return kind_; }
    QuadratureRule rule() const noexcept { return rule_; }

    /// Integral over [t_k, T]. Reads boundary[k+1..N]; `start` stands in for b(t_k), which
    /// is the unknown while node k is being solved.
    double memory_sum(std::size_t k, double x, std::span<const double> boundary,
                      double start) const;

    double terminal_part(std::size_t k, double x) const;

    double node_value(std::size_t k, double x, std::span<const double> boundary) const {
        return terminal_part(k, x) + memory_sum(k, x, boundary, boundary[k]);
    }

    /// Value at an arbitrary t in [0, T]; the sub-interval holding t is integrated from t.
    double value(double t, double x, std::span<const double> boundary) const;

private:
    static constexpr std::size_t kPoints = 8;

    double terminal(const StepLaw& rest, double x) const;
    double cap(std::size_t l, double weight) const;

    OUParams p_;
    TimeGrid grid_;
    KernelKind kind_;
    TerminalPayoff payoff_;
    QuadratureRule rule_;
    std::vector<StepLaw> lags_;         // law over j h, j = 0..N
    std::vector<StepLaw> first_laws_;   // u = s_i^2 on the first sub-interval
    std::vector<double> first_weights_;
    std::vector<StepLaw> inner_laws_;   // [(j - 1) * kPoints + i], u = j h + node_i
    std::vector<double> inner_weights_;
    std::vector<double> first_lambda_;  // [k * kPoints + i]
    std::vector<double> inner_lambda_;  // [l * kPoints + i]
};

/// Per-node record of the root searches.
struct SolveDiagnostics {
    std::vector<int> evaluations;  ///< indexed by node, 0 at the terminal node
    std::vector<double> residuals;
    int clamped_nodes = 0;

    double max_residual() const;
    int total_evaluations() const;
};

/// Exit-side value at grid node k, V(t_k, x). Used inside the entry recursions.
using NodeValueFn = std::function<double(std::size_t k, double x)>;

struct SolverOptions {
    QuadratureRule rule = QuadratureRule::GaussSqrt;
    double tol = 1e-10;  ///< accepted node residual
};

Boundary solve_exit_long(const OUParams& p, const TimeGrid& grid,
                         SolveDiagnostics* diag = nullptr, const SolverOptions& opts = {});
Boundary solve_exit_short(const OUParams& p, const TimeGrid& grid,
                          SolveDiagnostics* diag = nullptr, const SolverOptions& opts = {});
Boundary solve_exit_long_cost(const OUParams& p, const TimeGrid& grid, double fee,
                              SolveDiagnostics* diag = nullptr, const SolverOptions& opts = {});

/// v_exit(k, x) must evaluate V^{1,L}(t_k, x); the overload without it uses the
/// representation built on `exit`.
Boundary solve_entry_long(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                          const NodeValueFn& v_exit, SolveDiagnostics* diag = nullptr,
                          const SolverOptions& opts = {});
Boundary solve_entry_long(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                          SolveDiagnostics* diag = nullptr, const SolverOptions& opts = {});

/// v_exit(k, x) must evaluate V^{2,L}(t_k, x).
Boundary solve_entry_short(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                           const NodeValueFn& v_exit, SolveDiagnostics* diag = nullptr,
                           const SolverOptions& opts = {});
Boundary solve_entry_short(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                           SolveDiagnostics* diag = nullptr, const SolverOptions& opts = {});

enum class Strategy { LongShort, ShortLong, Chooser, CostExit };

enum class Role { ExitLong, EntryLong, ExitShort, EntryShort, CostExit };

std::string_view to_string(Strategy s);
std::string_view to_string(Role r);
std::optional<Strategy> parse_strategy(std::string_view s);
std::optional<Role> parse_role(std::string_view s);

/// Roles held by a strategy, in CSV column order.
std::vector<Role> roles_of(Strategy s);

/// Boundaries plus the parameters they were solved under.
struct StrategySolution {
    OUParams params;
    Strategy strategy;
    double fee = 0.0;
    QuadratureRule rule = QuadratureRule::GaussSqrt;
    std::map<Role, Boundary> boundaries;
    std::map<Role, SolveDiagnostics> diagnostics;

    const TimeGrid& grid() const;
    bool has(Role r) const { return boundaries.count(r) != 0; }
    /// Throws std::invalid_argument naming the role when it is absent.
    const Boundary& boundary(Role r) const;
};

/// Solves every boundary the strategy needs. fee is only accepted for CostExit.
StrategySolution solve_strategy(const OUParams& p, const TimeGrid& grid, Strategy strategy,
                                double fee = 0.0, const SolverOptions& opts = {});

/// Rebuilds a solution from boundaries produced elsewhere (e.g. a CSV file).
StrategySolution assemble_solution(const OUParams& p, Strategy strategy, double fee,
                                   std::map<Role, Boundary> boundaries,
                                   QuadratureRule rule = QuadratureRule::GaussSqrt);

}  // namespace ouspread
