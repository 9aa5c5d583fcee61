#include "ouspread/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <json.hpp>

#include "ouspread/lattice.hpp"
#include "ouspread/simulate.hpp"
#include "ouspread/value_surface.hpp"

namespace ouspread {

namespace {

std::string_view status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

CheckResult below(std::string name, double value, double limit, std::string detail = {}) {
    return {std::move(name), value <= limit ? CheckStatus::Pass : CheckStatus::Fail, value, limit,
            std::move(detail)};
}

CheckResult skipped(std::string name, std::string why) {
    return {std::move(name), CheckStatus::Skipped, 0.0, 0.0, std::move(why)};
}

std::string role_name(Role r) { return std::string(to_string(r)); }

std::optional<std::pair<Role, Role>> ordered_pair(Strategy s) {
    switch (s) {
        case Strategy::LongShort: return std::pair{Role::EntryLong, Role::ExitLong};
        case Strategy::ShortLong: return std::pair{Role::ExitShort, Role::EntryShort};
        case Strategy::Chooser: return std::pair{Role::ExitShort, Role::ExitLong};
        case Strategy::CostExit: return std::nullopt;
    }
    return std::nullopt;
}

void check_symmetry(const StrategySolution& sol, const ValidateOptions& opts,
                    std::vector<CheckResult>& out) {
    if (sol.params.theta() != 0.0) {
        out.push_back(skipped("symmetry", "mirror identities need theta = 0"));
        return;
    }
    auto worst_sum = [](const Boundary& a, const Boundary& b) {
        double w = 0.0;
        for (std::size_t k = 0; k < a.grid().size(); ++k) w = std::max(w, std::abs(a[k] + b[k]));
        return w;
    };
    switch (sol.strategy) {
        case Strategy::Chooser:
            out.push_back(below("symmetry/exit",
                                worst_sum(sol.boundary(Role::ExitLong), sol.boundary(Role::ExitShort)),
                                opts.symmetry_tol));
            return;
        case Strategy::LongShort:
        case Strategy::ShortLong: {
            const bool long_side = sol.strategy == Strategy::LongShort;
            const auto mirror = solve_strategy(sol.params, sol.grid(),
                                               long_side ? Strategy::ShortLong : Strategy::LongShort,
                                               0.0, SolverOptions{sol.rule});
            const auto& L = long_side ? sol : mirror;
            const auto& S = long_side ? mirror : sol;
            out.push_back(below("symmetry/exit",
                                worst_sum(L.boundary(Role::ExitLong), S.boundary(Role::ExitShort)),
                                opts.symmetry_tol));
            out.push_back(below("symmetry/entry",
                                worst_sum(L.boundary(Role::EntryLong), S.boundary(Role::EntryShort)),
                                opts.symmetry_tol));
            return;
        }
        case Strategy::CostExit:
            out.push_back(skipped("symmetry", "the fee breaks the mirror image"));
            return;
    }
}

void check_oracle(const StrategySolution& sol, Role role, const ValueEvaluator& v,
                  const ValidateOptions& opts, std::vector<CheckResult>& out) {
    const auto& p = sol.params;
    const auto spec = LatticeSpec::covering(p, opts.lattice_time, opts.lattice_space);
    const auto dp = dp_value(p, spec, role, role == Role::CostExit ? sol.fee : 0.0);
    const ValueRole vr = value_role(role);

    const std::size_t lo = spec.n_space / 5, hi = spec.n_space - lo;
    double gap = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        gap = std::max(gap, std::abs(v({0.0, dp.xs[i], vr}) - dp.value0[i]));
    out.push_back(below("oracle/" + role_name(role), gap, opts.oracle_tol,
                        "max |lattice - integral| at t = 0, mid 60% of the mesh"));

    const Boundary& b = sol.boundary(role);
    double cells = 0.0;
    std::size_t missing = 0;
    // the last lattice step may stop everywhere, leaving no frontier
    for (std::size_t n = 0; n + 1 < spec.n_time; ++n) {
        if (!dp.frontier[n]) {
            ++missing;
            continue;
        }
        cells = std::max(cells, std::abs(dp.frontier[n]->stop - b.at(dp.time(n))) / spec.dx());
    }
    auto res = below("frontier/" + role_name(role), cells, opts.frontier_cells,
                     "max distance from the lattice exercise frontier, in cells");
    if (missing) {
        res.status = CheckStatus::Fail;
        res.detail += "; " + std::to_string(missing) + " steps without a frontier";
    }
    out.push_back(std::move(res));
}

void check_smooth_fit(const StrategySolution& sol, Role role, const ValueEvaluator& v,
                      const ValidateOptions& opts, std::vector<CheckResult>& out) {
    const Boundary& b = sol.boundary(role);
    const ValueRole vr = value_role(role);
    const double d = opts.smooth_fit_step;
    double worst = 0.0;
    for (double frac : {0.25, 0.5, 0.75}) {
        const double t = frac * sol.params.T();
        const double x = b.at(t);
        const double slope = (v({t, x + d, vr}) - v({t, x - d, vr})) / (2.0 * d);
        worst = std::max(worst, std::abs(slope - 1.0));
    }
    out.push_back(below("smooth_fit/" + role_name(role), worst, opts.smooth_fit_tol,
                        "max |dV/dx - 1| across the boundary at t = T/4, T/2, 3T/4"));
}

}  // namespace

double terminal_value(const OUParams& p, Role role, double fee) {
    if (role == Role::CostExit) return (p.mu() * p.theta() + p.r() * fee) / (p.mu() + p.r());
    return p.x_star();
}

bool ValidationReport::passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

std::string ValidationReport::json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks)
        list.push_back({{"name", c.name},
                        {"status", std::string(status_name(c.status))},
                        {"value", c.value},
                        {"limit", c.limit},
                        {"detail", c.detail}});
    return nlohmann::json{{"passed", passed()}, {"checks", list}}.dump(2) + "\n";
}

ValidationReport validate_solution(const StrategySolution& sol, const ValidateOptions& opts) {
    ValidationReport rep;
    auto& out = rep.checks;
    const auto& p = sol.params;
    const auto& grid = sol.grid();

    for (const auto& [role, b] : sol.boundaries)
        out.push_back(below("terminal/" + role_name(role),
                            std::abs(b.terminal() - terminal_value(p, role, sol.fee)), 0.0));

    for (const auto& [role, b] : sol.boundaries) {
        double worst = 0.0;
        const bool down = is_nonincreasing(b.tag());
        for (std::size_t k = 0; k + 1 < grid.size(); ++k)
            worst = std::max(worst, down ? b[k + 1] - b[k] : b[k] - b[k + 1]);
        auto res = below("monotone/" + role_name(role), worst, 1e-12,
                         "largest step against the expected direction");
        if (auto k = b.monotonicity_violation()) res.detail += " (first at node " + std::to_string(*k) + ")";
        out.push_back(std::move(res));
    }

    if (auto pair = ordered_pair(sol.strategy)) {
        const Boundary& lower = sol.boundary(pair->first);
        const Boundary& upper = sol.boundary(pair->second);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < grid.n_steps(); ++k) worst = std::max(worst, lower[k] - upper[k]);
        CheckResult res{"ordering", worst < 0.0 ? CheckStatus::Pass : CheckStatus::Fail, worst, 0.0,
                        role_name(pair->first) + " stays below " + role_name(pair->second) +
                            " before T"};
        out.push_back(std::move(res));
    }

    check_symmetry(sol, opts, out);

    const ValueEvaluator v(sol);
    for (const auto& [role, _] : sol.boundaries) check_oracle(sol, role, v, opts, out);
    for (Role role : {Role::ExitLong, Role::ExitShort, Role::CostExit})
        if (sol.has(role)) check_smooth_fit(sol, role, v, opts, out);

    SimOptions so;
    so.x0 = p.theta();
    so.substeps = opts.substeps;
    const SimReport sim = simulate_strategy(sol, opts.paths, opts.seed, so);
    const double target = simulated_target(sol, 0.0, so.x0);
    const double z = sim.std_error > 0.0 ? std::abs(sim.mean_payoff - target) / sim.std_error : 0.0;
    out.push_back(below("simulation", z, opts.sim_sigmas,
                        "|mean payoff - solver value| in standard errors, " +
                            std::to_string(opts.paths) + " paths from x = theta"));
    return rep;
}

}  // namespace ouspread
