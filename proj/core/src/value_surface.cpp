#include "ouspread/value_surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ouspread/errors.hpp"
#include "ouspread/root_find.hpp"

namespace ouspread {

std::string_view to_string(ValueRole r) {
    switch (r) {
        case ValueRole::ExitLong: return "exit_long";
        case ValueRole::EntryLong: return "entry_long";
        case ValueRole::ExitShort: return "exit_short";
        case ValueRole::EntryShort: return "entry_short";
        case ValueRole::Chooser: return "chooser";
        case ValueRole::CostExit: return "cost_exit";
    }
    return "unknown";
}

ValueRole value_role(Role r) {
    switch (r) {
        case Role::ExitLong: return ValueRole::ExitLong;
        case Role::EntryLong: return ValueRole::EntryLong;
        case Role::ExitShort: return ValueRole::ExitShort;
        case Role::EntryShort: return ValueRole::EntryShort;
        case Role::CostExit: return ValueRole::CostExit;
    }
    throw std::invalid_argument("unknown role");
}

std::optional<ValueRole> parse_value_role(std::string_view s) {
    if (s == "chooser") return ValueRole::Chooser;
    if (auto r = parse_role(s)) return value_role(*r);
    return std::nullopt;
}

namespace {

constexpr std::size_t kRoles = 5;

std::optional<IntegralRepresentation> make_repr(const StrategySolution& sol, Role role) {
    if (!sol.has(role)) return std::nullopt;
    const auto& p = sol.params;
    const auto& grid = sol.grid();
    switch (role) {
        case Role::ExitLong:
            return IntegralRepresentation(p, grid, KernelKind::exit_long(), TerminalPayoff::Spread,
                                          sol.rule);
        case Role::ExitShort:
            return IntegralRepresentation(p, grid, KernelKind::exit_short(),
                                          TerminalPayoff::Spread, sol.rule);
        case Role::CostExit:
            return IntegralRepresentation(p, grid, KernelKind::exit_long_with_cost(sol.fee),
                                          TerminalPayoff::SpreadLessFee, sol.rule);
        case Role::EntryShort:
            return IntegralRepresentation(p, grid, KernelKind::entry_short(), TerminalPayoff::Zero,
                                          sol.rule);
        case Role::EntryLong:
            if (!sol.has(Role::ExitLong)) return std::nullopt;
            return IntegralRepresentation(p, grid,
                                          KernelKind::entry_long(sol.boundary(Role::ExitLong)),
                                          TerminalPayoff::Zero, sol.rule);
    }
    return std::nullopt;
}

}  // namespace

ValueEvaluator::ValueEvaluator(const StrategySolution& sol) : sol_(sol), reprs_(kRoles) {
    for (std::size_t i = 0; i < kRoles; ++i) reprs_[i] = make_repr(sol, static_cast<Role>(i));
}

const IntegralRepresentation& ValueEvaluator::repr(Role role) const {
    const auto& r = reprs_[static_cast<std::size_t>(role)];
    if (!r)
        throw std::invalid_argument("strategy " + std::string(to_string(sol_.strategy)) +
                                    " has no " + std::string(to_string(role)) + " boundary");
    return *r;
}

double ValueEvaluator::exit_long(double t, double x) const {
    return repr(Role::ExitLong).value(t, x, sol_.boundary(Role::ExitLong).values());
}

double ValueEvaluator::entry_long(double t, double x) const {
    return repr(Role::EntryLong).value(t, x, sol_.boundary(Role::EntryLong).values());
}

double ValueEvaluator::exit_short(double t, double x) const {
    return repr(Role::ExitShort).value(t, x, sol_.boundary(Role::ExitShort).values());
}

double ValueEvaluator::entry_short(double t, double x) const {
    return repr(Role::EntryShort).value(t, x, sol_.boundary(Role::EntryShort).values());
}

double ValueEvaluator::chooser(double t, double x) const {
    return exit_long(t, x) - exit_short(t, x);
}

double ValueEvaluator::cost_exit(double t, double x) const {
    return repr(Role::CostExit).value(t, x, sol_.boundary(Role::CostExit).values());
}

double ValueEvaluator::operator()(const ValueQuery& q) const {
    switch (q.role) {
        case ValueRole::ExitLong: return exit_long(q.t, q.x);
        case ValueRole::EntryLong: return entry_long(q.t, q.x);
        case ValueRole::ExitShort: return exit_short(q.t, q.x);
        case ValueRole::EntryShort: return entry_short(q.t, q.x);
        case ValueRole::Chooser: return chooser(q.t, q.x);
        case ValueRole::CostExit: return cost_exit(q.t, q.x);
    }
    throw std::invalid_argument("unknown value role");
}

double ValueEvaluator::chooser_payoff(double t, double x) const {
    return std::max(exit_long(t, x) - x, x - exit_short(t, x));
}

double eval_v_exit_long(const StrategySolution& sol, const ValueQuery& q) {
    return ValueEvaluator(sol).exit_long(q.t, q.x);
}
double eval_v_entry_long(const StrategySolution& sol, const ValueQuery& q) {
    return ValueEvaluator(sol).entry_long(q.t, q.x);
}
double eval_v_exit_short(const StrategySolution& sol, const ValueQuery& q) {
    return ValueEvaluator(sol).exit_short(q.t, q.x);
}
double eval_v_entry_short(const StrategySolution& sol, const ValueQuery& q) {
    return ValueEvaluator(sol).entry_short(q.t, q.x);
}
double eval_v_chooser(const StrategySolution& sol, const ValueQuery& q) {
    return ValueEvaluator(sol).chooser(q.t, q.x);
}
double eval_v_exit_long_cost(const StrategySolution& sol, const ValueQuery& q) {
    return ValueEvaluator(sol).cost_exit(q.t, q.x);
}

double chooser_payoff(const StrategySolution& sol, double t, double x) {
    return ValueEvaluator(sol).chooser_payoff(t, x);
}

double indifference_threshold(const StrategySolution& sol, double t) {
    const auto& grid = sol.grid();
    if (!(t >= 0.0 && t < grid.T()))
        throw std::out_of_range("indifference threshold needs t in [0, T)");
    const ValueEvaluator v(sol);
    const double lo = sol.boundary(Role::ExitShort).at(t);
    const double hi = sol.boundary(Role::ExitLong).at(t);
    // long branch minus short branch; positive at b^{2,L}, negative at b^{1,L}
    auto f = [&](double x) { return (v.exit_long(t, x) - x) - (x - v.exit_short(t, x)); };
    const double flo = f(lo), fhi = f(hi);
    if (flo * fhi > 0.0)
        throw RootNotBracketed("chooser branches do not cross between the exit boundaries");
    RootOptions opts;
    opts.tol = 1e-9;
    opts.scale = std::max(1.0, std::abs(hi - lo));
    return brent(f, lo, hi, flo, fhi, opts).root;
}

GammaCurve gamma_curve(const StrategySolution& sol) {
    if (!sol.has(Role::CostExit))
        throw std::invalid_argument("gamma curve needs a cost-exit solution");
    if (!(sol.fee > 0.0)) throw std::invalid_argument("gamma curve needs a positive fee");
    const auto& p = sol.params;
    const auto& grid = sol.grid();
    const auto& b = sol.boundary(Role::CostExit);
    const ValueEvaluator v(sol);
    const double c = sol.fee;

    GammaCurve out{grid, p.theta() - 10.0 * p.stationary_sd(), {}};
    out.values.assign(grid.size(), std::nullopt);
    RootOptions opts;
    opts.tol = 1e-9;
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
        const double t = grid.node(k);
        auto f = [&](double x) { return v.cost_exit(t, x) - x - c; };
        const double lo = out.floor, hi = b[k];
        const double flo = f(lo), fhi = f(hi);
        if (!(flo > 0.0 && fhi < 0.0)) continue;
        out.values[k] = brent(f, lo, hi, flo, fhi, opts).root;
    }
    return out;
}

ValueSurface fill_surface(const StrategySolution& sol, ValueRole role,
                          const std::vector<double>& times, const std::vector<double>& xs) {
    const ValueEvaluator v(sol);
    ValueSurface s{role, times, xs, {}};
    s.values.assign(xs.size(), std::vector<double>(times.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < times.size(); ++j) s.values[i][j] = v({times[j], xs[i], role});
    return s;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

}  // namespace ouspread
