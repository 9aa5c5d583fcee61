#include "ouspread/boundary_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ouspread/errors.hpp"
#include "ouspread/root_find.hpp"

namespace ouspread {

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 8> kGaussNodes = {
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
    -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
    0.79666647741362673959,  0.96028985649753623168};
constexpr std::array<double, 8> kGaussWeights = {
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
    0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

/// Nodes and weights for int_0^w f(u) du with u = s^2, s in (0, sqrt(w)).
void sqrt_rule(double width, std::array<double, 8>& u, std::array<double, 8>& w) {
    const double root = std::sqrt(width);
    for (std::size_t i = 0; i < 8; ++i) {
        const double s = 0.5 * root * (kGaussNodes[i] + 1.0);
        u[i] = s * s;
        w[i] = kGaussWeights[i] * root * s;  // (root / 2) * 2 s
    }
}

}  // namespace

IntegralRepresentation::IntegralRepresentation(const OUParams& p, const TimeGrid& grid,
                                               KernelKind kind, TerminalPayoff payoff,
                                               QuadratureRule rule)
    : p_(p), grid_(grid), kind_(kind), payoff_(payoff), rule_(rule) {
    if (std::abs(grid.T() - p.T()) > 1e-12 * p.T())
        throw std::invalid_argument("grid horizon differs from the model horizon");
    if (kind.tag() == KernelTag::EntryLong && !(kind.exit_boundary()->grid() == grid))
        throw std::invalid_argument("entry kernel's exit boundary lives on a different grid");

    const std::size_t n = grid.n_steps();
    const double h = grid.h();
    lags_.reserve(n + 1);
    for (std::size_t j = 0; j <= n; ++j) lags_.push_back(step_law(p, grid.node(j)));
    if (rule_ == QuadratureRule::RightRectangle) return;

    std::array<double, kPoints> u{}, w{};
    sqrt_rule(h, u, w);
    for (std::size_t i = 0; i < kPoints; ++i) {
        first_laws_.push_back(step_law(p, u[i]));
        first_weights_.push_back(w[i]);
    }
    for (std::size_t i = 0; i < kPoints; ++i)
        inner_weights_.push_back(0.5 * h * kGaussWeights[i]);
    inner_laws_.reserve((n - 1) * kPoints);
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < kPoints; ++i)
            inner_laws_.push_back(step_law(p, h * (static_cast<double>(j) + 0.5 * (kGaussNodes[i] + 1.0))));
    first_lambda_.resize(n * kPoints);
    inner_lambda_.resize(n * kPoints);
    for (std::size_t l = 0; l < n; ++l) {
        const double tl = grid.node(l);
        for (std::size_t i = 0; i < kPoints; ++i) {
            first_lambda_[l * kPoints + i] = interpolation_weight(grid, l, tl + u[i]);
            inner_lambda_[l * kPoints + i] =
                interpolation_weight(grid, l, tl + 0.5 * h * (kGaussNodes[i] + 1.0));
        }
    }
}

double IntegralRepresentation::cap(std::size_t l, double weight) const {
    if (kind_.tag() != KernelTag::EntryLong) return 0.0;
    const Boundary& exit = *kind_.exit_boundary();
    if (weight == 1.0) return exit[l + 1];
    return exit[l] + weight * (exit[l + 1] - exit[l]);
}

double IntegralRepresentation::memory_sum(std::size_t k, double x,
                                          std::span<const double> boundary,
                                          double start) const {
    const std::size_t n = grid_.n_steps();
    if (rule_ == QuadratureRule::RightRectangle) {
        double sum = 0.0;
        for (std::size_t l = k; l < n; ++l)
            sum += kernel(kind_, p_, lags_[l + 1 - k], x, boundary[l + 1], cap(l, 1.0));
        return grid_.h() * sum;
    }
    if (k >= n) return 0.0;

    double sum = 0.0;
    for (std::size_t i = 0; i < kPoints; ++i) {
        const double lam = first_lambda_[k * kPoints + i];
        const double z = start + lam * (boundary[k + 1] - start);
        sum += first_weights_[i] * kernel(kind_, p_, first_laws_[i], x, z, cap(k, lam));
    }
    for (std::size_t l = k + 1; l < n; ++l) {
        const StepLaw* laws = &inner_laws_[(l - k - 1) * kPoints];
        const double* lams = &inner_lambda_[l * kPoints];
        const double b0 = boundary[l];
        const double db = boundary[l + 1] - b0;
        for (std::size_t i = 0; i < kPoints; ++i)
            sum += inner_weights_[i] * kernel(kind_, p_, laws[i], x, b0 + lams[i] * db, cap(l, lams[i]));
    }
    return sum;
}

double IntegralRepresentation::terminal(const StepLaw& rest, double x) const {
    switch (payoff_) {
        case TerminalPayoff::Spread: return rest.discount * rest.mean(x);
        case TerminalPayoff::SpreadLessFee: return rest.discount * (rest.mean(x) - kind_.cost());
        case TerminalPayoff::Zero: return 0.0;
    }
    return 0.0;
}

double IntegralRepresentation::terminal_part(std::size_t k, double x) const {
    return terminal(lags_[grid_.n_steps() - k], x);
}

double IntegralRepresentation::value(double t, double x, std::span<const double> boundary) const {
    const std::size_t k = grid_.locate(t);
    if (grid_.node(k) == t) return node_value(k, x, boundary);

    const std::size_t n = grid_.n_steps();
    const double h = grid_.h();
    const double head = grid_.node(k + 1) - t;
    double sum = 0.0;
    if (rule_ == QuadratureRule::RightRectangle) {
        sum = head * kernel(kind_, p_, step_law(p_, head), x, boundary[k + 1], cap(k, 1.0));
        double rest = 0.0;
        for (std::size_t l = k + 1; l < n; ++l)
            rest += kernel(kind_, p_, step_law(p_, grid_.node(l + 1) - t), x, boundary[l + 1],
                           cap(l, 1.0));
        sum += h * rest;
    } else {
        std::array<double, kPoints> u{}, w{};
        sqrt_rule(head, u, w);
        for (std::size_t i = 0; i < kPoints; ++i) {
            const double lam = interpolation_weight(grid_, k, t + u[i]);
            const double z = boundary[k] + lam * (boundary[k + 1] - boundary[k]);
            sum += w[i] * kernel(kind_, p_, step_law(p_, u[i]), x, z, cap(k, lam));
        }
        for (std::size_t l = k + 1; l < n; ++l) {
            const double* lams = &inner_lambda_[l * kPoints];
            const double tl = grid_.node(l);
            for (std::size_t i = 0; i < kPoints; ++i) {
                const double tau = tl + 0.5 * h * (kGaussNodes[i] + 1.0);
                const double z = boundary[l] + lams[i] * (boundary[l + 1] - boundary[l]);
                sum += inner_weights_[i] *
                       kernel(kind_, p_, step_law(p_, tau - t), x, z, cap(l, lams[i]));
            }
        }
    }
    return terminal(step_law(p_, grid_.T() - t), x) + sum;
}

double SolveDiagnostics::max_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
}

int SolveDiagnostics::total_evaluations() const {
    return std::accumulate(evaluations.begin(), evaluations.end(), 0);
}

namespace {

constexpr double kClampSlack = 1e-9;

/// Equation at node k as a function of the candidate node value.
using NodeEquation = std::function<double(std::size_t k, double x)>;

Boundary backward_recursion(const OUParams& p, const TimeGrid& grid, KernelTag tag, double cost,
                            double terminal, std::vector<double>& values,
                            const NodeEquation& equation, RootOptions opts,
                            SolveDiagnostics* diag) {
    const std::size_t n = grid.n_steps();
    values.assign(grid.size(), 0.0);
    values[n] = terminal;
    SolveDiagnostics local;
    local.evaluations.assign(grid.size(), 0);
    local.residuals.assign(grid.size(), 0.0);

    const bool down = is_nonincreasing(tag);
    opts.initial_step = 0.05 * p.stationary_sd() * std::sqrt(grid.h());
    for (std::size_t k = n; k-- > 0;) {
        RootResult res;
        try {
            res = root_find([&](double x) { return equation(k, x); }, values[k + 1], opts);
        } catch (const RootNotBracketed& e) {
            std::ostringstream msg;
            msg << to_string(tag) << " step " << k << " (t = " << grid.node(k) << "): " << e.what();
            throw RootNotBracketed(msg.str(), k);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << to_string(tag) << " step " << k << " (t = " << grid.node(k) << "): " << e.what();
            throw RootNotBracketed(msg.str(), k);
        }
        double b = res.root;
        // how far b moved the wrong way relative to the later node
        const double violation = down ? values[k + 1] - b : b - values[k + 1];
        if (violation > 0.0) {
            if (violation > kClampSlack) {
                std::ostringstream msg;
                msg << to_string(tag) << " step " << k << " (t = " << grid.node(k)
                    << ") breaks monotonicity by " << violation;
                throw NonMonotone(msg.str(), k);
            }
            b = values[k + 1];
            ++local.clamped_nodes;
        }
        values[k] = b;
        local.evaluations[k] = res.evaluations;
        local.residuals[k] = res.residual;
    }
    if (diag) *diag = std::move(local);
    return Boundary(grid, values, tag, cost);
}

Boundary solve_exit(const OUParams& p, const TimeGrid& grid, KernelKind kind,
                    TerminalPayoff payoff, double terminal, SolveDiagnostics* diag,
                    const SolverOptions& sopts) {
    const IntegralRepresentation repr(p, grid, kind, payoff, sopts.rule);
    std::vector<double> values;
    // at the boundary the value equals the stopping payoff x - c
    const double fee = kind.cost();
    const NodeEquation eq = [&](std::size_t k, double x) {
        return (x - fee) - repr.terminal_part(k, x) - repr.memory_sum(k, x, values, x);
    };
    RootOptions opts;
    opts.tol = sopts.tol;
    return backward_recursion(p, grid, kind.tag(), fee, terminal, values, eq, opts, diag);
}

double entry_floor(const OUParams& p) { return p.theta() - 10.0 * p.stationary_sd(); }
double entry_ceiling(const OUParams& p) { return p.theta() + 10.0 * p.stationary_sd(); }

}  // namespace

Boundary solve_exit_long(const OUParams& p, const TimeGrid& grid, SolveDiagnostics* diag,
                         const SolverOptions& opts) {
    return solve_exit(p, grid, KernelKind::exit_long(), TerminalPayoff::Spread, p.x_star(), diag,
                      opts);
}

Boundary solve_exit_short(const OUParams& p, const TimeGrid& grid, SolveDiagnostics* diag,
                          const SolverOptions& opts) {
    return solve_exit(p, grid, KernelKind::exit_short(), TerminalPayoff::Spread, p.x_star(), diag,
                      opts);
}

Boundary solve_exit_long_cost(const OUParams& p, const TimeGrid& grid, double fee,
                              SolveDiagnostics* diag, const SolverOptions& opts) {
    const double terminal = (p.mu() * p.theta() + p.r() * fee) / (p.mu() + p.r());
    return solve_exit(p, grid, KernelKind::exit_long_with_cost(fee), TerminalPayoff::SpreadLessFee,
                      terminal, diag, opts);
}

Boundary solve_entry_long(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                          const NodeValueFn& v_exit, SolveDiagnostics* diag,
                          const SolverOptions& sopts) {
    const IntegralRepresentation repr(p, grid, KernelKind::entry_long(exit), TerminalPayoff::Zero,
                                      sopts.rule);
    std::vector<double> values;
    const NodeEquation eq = [&](std::size_t k, double x) {
        return v_exit(k, x) - x - repr.memory_sum(k, x, values, x);
    };
    RootOptions opts;
    opts.tol = sopts.tol;
    opts.lower = entry_floor(p);
    return backward_recursion(p, grid, KernelTag::EntryLong, 0.0, p.x_star(), values, eq, opts,
                              diag);
}

Boundary solve_entry_long(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                          SolveDiagnostics* diag, const SolverOptions& opts) {
    const IntegralRepresentation v(p, grid, KernelKind::exit_long(), TerminalPayoff::Spread,
                                   opts.rule);
    return solve_entry_long(
        p, grid, exit, [&](std::size_t k, double x) { return v.node_value(k, x, exit.values()); },
        diag, opts);
}

Boundary solve_entry_short(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                           const NodeValueFn& v_exit, SolveDiagnostics* diag,
                           const SolverOptions& sopts) {
    if (exit.tag() != KernelTag::ExitShort)
        throw std::invalid_argument("short entry needs a solved exit_short boundary");
    const IntegralRepresentation repr(p, grid, KernelKind::entry_short(), TerminalPayoff::Zero,
                                      sopts.rule);
    std::vector<double> values;
    const NodeEquation eq = [&](std::size_t k, double x) {
        return x - v_exit(k, x) - repr.memory_sum(k, x, values, x);
    };
    RootOptions opts;
    opts.tol = sopts.tol;
    opts.upper = entry_ceiling(p);
    return backward_recursion(p, grid, KernelTag::EntryShort, 0.0, p.x_star(), values, eq, opts,
                              diag);
}

Boundary solve_entry_short(const OUParams& p, const TimeGrid& grid, const Boundary& exit,
                           SolveDiagnostics* diag, const SolverOptions& opts) {
    const IntegralRepresentation v(p, grid, KernelKind::exit_short(), TerminalPayoff::Spread,
                                   opts.rule);
    return solve_entry_short(
        p, grid, exit, [&](std::size_t k, double x) { return v.node_value(k, x, exit.values()); },
        diag, opts);
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::LongShort: return "long-short";
        case Strategy::ShortLong: return "short-long";
        case Strategy::Chooser: return "chooser";
        case Strategy::CostExit: return "cost-exit";
    }
    return "unknown";
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::ExitLong: return "exit_long";
        case Role::EntryLong: return "entry_long";
        case Role::ExitShort: return "exit_short";
        case Role::EntryShort: return "entry_short";
        case Role::CostExit: return "cost_exit";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    for (Strategy v : {Strategy::LongShort, Strategy::ShortLong, Strategy::Chooser, Strategy::CostExit})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::optional<Role> parse_role(std::string_view s) {
    for (Role v : {Role::ExitLong, Role::EntryLong, Role::ExitShort, Role::EntryShort, Role::CostExit}) {
        if (to_string(v) == s) return v;
        // accept the dashed spelling used on the command line
        std::string dashed(to_string(v));
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        if (dashed == s) return v;
    }
    return std::nullopt;
}

std::vector<Role> roles_of(Strategy s) {
    switch (s) {
        case Strategy::LongShort: return {Role::ExitLong, Role::EntryLong};
        case Strategy::ShortLong: return {Role::ExitShort, Role::EntryShort};
        case Strategy::Chooser: return {Role::ExitLong, Role::ExitShort};
        case Strategy::CostExit: return {Role::CostExit};
    }
    return {};
}

const TimeGrid& StrategySolution::grid() const {
    if (boundaries.empty()) throw std::logic_error("solution holds no boundaries");
    return boundaries.begin()->second.grid();
}

const Boundary& StrategySolution::boundary(Role r) const {
    auto it = boundaries.find(r);
    if (it == boundaries.end())
        throw std::invalid_argument(std::string("solution has no ") + std::string(to_string(r)) +
                                    " boundary");
    return it->second;
}

StrategySolution solve_strategy(const OUParams& p, const TimeGrid& grid, Strategy strategy,
                                double fee, const SolverOptions& opts) {
    if (fee != 0.0 && strategy != Strategy::CostExit)
        throw std::invalid_argument("a fee is only supported with the cost-exit strategy");
    StrategySolution sol{p, strategy, fee, opts.rule, {}, {}};
    auto put = [&](Role role, Boundary b, SolveDiagnostics d) {
        sol.boundaries.emplace(role, std::move(b));
        sol.diagnostics.emplace(role, std::move(d));
    };
    SolveDiagnostics d1, d2;
    switch (strategy) {
        case Strategy::LongShort: {
            Boundary exit = solve_exit_long(p, grid, &d1, opts);
            Boundary entry = solve_entry_long(p, grid, exit, &d2, opts);
            put(Role::ExitLong, std::move(exit), std::move(d1));
            put(Role::EntryLong, std::move(entry), std::move(d2));
            break;
        }
        case Strategy::ShortLong: {
            Boundary exit = solve_exit_short(p, grid, &d1, opts);
            Boundary entry = solve_entry_short(p, grid, exit, &d2, opts);
            put(Role::ExitShort, std::move(exit), std::move(d1));
            put(Role::EntryShort, std::move(entry), std::move(d2));
            break;
        }
        case Strategy::Chooser:
            put(Role::ExitLong, solve_exit_long(p, grid, &d1, opts), std::move(d1));
            put(Role::ExitShort, solve_exit_short(p, grid, &d2, opts), std::move(d2));
            break;
        case Strategy::CostExit:
            put(Role::CostExit, solve_exit_long_cost(p, grid, fee, &d1, opts), std::move(d1));
            break;
    }
    return sol;
}

StrategySolution assemble_solution(const OUParams& p, Strategy strategy, double fee,
                                   std::map<Role, Boundary> boundaries, QuadratureRule rule) {
    for (Role r : roles_of(strategy))
        if (!boundaries.count(r))
            throw std::invalid_argument(std::string(to_string(strategy)) + " needs a " +
                                        std::string(to_string(r)) + " boundary");
    const TimeGrid& g = boundaries.begin()->second.grid();
    for (const auto& [role, b] : boundaries)
        if (!(b.grid() == g)) throw std::invalid_argument("boundaries live on different grids");
    return StrategySolution{p, strategy, fee, rule, std::move(boundaries), {}};
}

}  // namespace ouspread
