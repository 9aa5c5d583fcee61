#include "ouspread/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ouspread/errors.hpp"

namespace ouspread {

GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = nd * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

LatticeSpec LatticeSpec::covering(const OUParams& p, std::size_t n_time, std::size_t n_space,
                                  double width) {
    LatticeSpec s;
    s.n_time = n_time;
    s.n_space = n_space;
    s.x_min = p.theta() - width * p.stationary_sd();
    s.x_max = p.theta() + width * p.stationary_sd();
    s.validate();
    return s;
}

double LatticeSpec::x(std::size_t i) const {
    return i + 1 == n_space ? x_max : x_min + static_cast<double>(i) * dx();
}

void LatticeSpec::validate() const {
    if (n_time < 1) throw std::invalid_argument("lattice needs at least one time step");
    if (n_space < 4) throw std::invalid_argument("lattice needs at least four spatial nodes");
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("lattice bounds must be finite with x_min < x_max");
    if (quad_order < 2) throw std::invalid_argument("lattice quadrature needs >= 2 nodes");
}

double DpResult::time(std::size_t n) const {
    return n == spec.n_time ? horizon
                            : static_cast<double>(n) * (horizon / static_cast<double>(spec.n_time));
}

double DpResult::value_at(double x) const {
    const double dx = spec.dx();
    const auto last = static_cast<double>(xs.size() - 2);
    const double j = std::clamp(std::floor((x - spec.x_min) / dx), 0.0, last);
    const auto ji = static_cast<std::size_t>(j);
    const double frac = (x - xs[ji]) / dx;
    return value0[ji] + frac * (value0[ji + 1] - value0[ji]);
}

namespace {

/// One row of the time-homogeneous transition operator: weights on nodes first..first+size.
struct Row {
    std::size_t first;
    std::vector<double> w;
};

std::vector<Row> transition_rows(const OUParams& p, const LatticeSpec& spec, double dt) {
    const GaussRule g = gauss_legendre(spec.quad_order);
    const StepLaw law = step_law(p, dt);
    constexpr double kSpan = 8.0;
    std::vector<double> omega(g.nodes.size());
    double total = 0.0;
    for (std::size_t q = 0; q < omega.size(); ++q) {
        omega[q] = g.weights[q] * kSpan * normal_pdf(kSpan * g.nodes[q]);
        total += omega[q];
    }
    for (double& w : omega) w /= total;

    const std::size_t n = spec.n_space;
    const double dx = spec.dx();
    const double last = static_cast<double>(n - 4);
    std::vector<Row> rows(n);
    std::vector<std::size_t> base(omega.size());
    std::vector<double> frac(omega.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double m = law.mean(spec.x(i));
        std::size_t lo = n, hi = 0;
        for (std::size_t q = 0; q < omega.size(); ++q) {
            const double y = m + kSpan * law.sd * g.nodes[q];
            // cubic stencil x_b..x_{b+3} centred on the cell; clamped at the mesh ends,
            // where it extrapolates
            const double b = std::clamp(std::floor((y - spec.x_min) / dx) - 1.0, 0.0, last);
            base[q] = static_cast<std::size_t>(b);
            frac[q] = (y - spec.x(base[q])) / dx;
            lo = std::min(lo, base[q]);
            hi = std::max(hi, base[q] + 3);
        }
        Row& row = rows[i];
        row.first = lo;
        row.w.assign(hi - lo + 1, 0.0);
        for (std::size_t q = 0; q < omega.size(); ++q) {
            const double s = frac[q];
            const double l[4] = {-(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
                                 s * (s - 2.0) * (s - 3.0) / 2.0,
                                 -s * (s - 1.0) * (s - 3.0) / 2.0,
                                 s * (s - 1.0) * (s - 2.0) / 6.0};
            for (std::size_t a = 0; a < 4; ++a) row.w[base[q] + a - lo] += omega[q] * l[a];
        }
    }
    return rows;
}

bool stops_above(Role stage) {
    return stage == Role::ExitLong || stage == Role::CostExit || stage == Role::EntryShort;
}

struct StageRun {
    std::vector<double> value0;
    std::vector<std::optional<FrontierCell>> frontier;
    std::vector<std::vector<double>> slices;
};

/// payoff(n, i) is the stopping payoff at step n; step n_time is the terminal slice.
template <class Payoff>
StageRun run_stage(const OUParams& p, const LatticeSpec& spec, const std::vector<Row>& rows,
                   Role stage, Payoff payoff, bool keep) {
    const std::size_t n = spec.n_space;
    const double dt = p.T() / static_cast<double>(spec.n_time);
    const double disc = std::exp(-p.r() * dt);
    const bool minimize = stage == Role::ExitShort;
    const bool above = stops_above(stage);

    StageRun out;
    out.frontier.resize(spec.n_time);
    if (keep) out.slices.resize(spec.n_time + 1);

    std::vector<double> next(n), cur(n);
    std::vector<char> stop(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = payoff(spec.n_time, i);
    if (keep) out.slices[spec.n_time] = next;

    for (std::size_t step = spec.n_time; step-- > 0;) {
        for (std::size_t i = 0; i < n; ++i) {
            const Row& row = rows[i];
            double e = 0.0;
            for (std::size_t j = 0; j < row.w.size(); ++j) e += row.w[j] * next[row.first + j];
            const double cont = disc * e;
            const double pay_i = payoff(step, i);
            stop[i] = minimize ? pay_i <= cont : pay_i >= cont;
            cur[i] = minimize ? std::min(pay_i, cont) : std::max(pay_i, cont);
        }
        // scan inward from the end where the stage stops
        std::optional<FrontierCell> cell;
        if (above && stop[n - 1]) {
            std::size_t i = n - 1;
            while (i > 0 && stop[i - 1]) --i;
            if (i > 0) cell = FrontierCell{spec.x(i), spec.x(i - 1)};
        } else if (!above && stop[0]) {
            std::size_t i = 0;
            while (i + 1 < n && stop[i + 1]) ++i;
            if (i + 1 < n) cell = FrontierCell{spec.x(i), spec.x(i + 1)};
        }
        out.frontier[step] = cell;
        std::swap(cur, next);
        if (keep) out.slices[step] = next;
    }
    out.value0 = next;
    return out;
}

DpResult dp_once(const OUParams& p, const LatticeSpec& spec, Role stage, double fee, bool keep) {
    spec.validate();
    if (fee != 0.0 && stage != Role::CostExit)
        throw std::invalid_argument("only the cost-exit stage takes a fee");
    if (!(fee >= 0.0)) throw std::invalid_argument("fee must be >= 0");
    const double dt = p.T() / static_cast<double>(spec.n_time);
    const auto rows = transition_rows(p, spec, dt);

    DpResult res;
    res.spec = spec;
    res.stage = stage;
    res.fee = fee;
    res.horizon = p.T();
    res.xs.resize(spec.n_space);
    for (std::size_t i = 0; i < spec.n_space; ++i) res.xs[i] = spec.x(i);
    const auto& xs = res.xs;

    StageRun run;
    switch (stage) {
        case Role::ExitLong:
        case Role::ExitShort:
            run = run_stage(p, spec, rows, stage, [&](std::size_t, std::size_t i) { return xs[i]; },
                            keep);
            break;
        case Role::CostExit:
            run = run_stage(p, spec, rows, stage,
                            [&](std::size_t, std::size_t i) { return xs[i] - fee; }, keep);
            break;
        case Role::EntryLong: {
            const auto exit = run_stage(p, spec, rows, Role::ExitLong,
                                        [&](std::size_t, std::size_t i) { return xs[i]; }, true);
            run = run_stage(
                p, spec, rows, stage,
                [&](std::size_t n, std::size_t i) { return exit.slices[n][i] - xs[i]; }, keep);
            break;
        }
        case Role::EntryShort: {
            const auto exit = run_stage(p, spec, rows, Role::ExitShort,
                                        [&](std::size_t, std::size_t i) { return xs[i]; }, true);
            run = run_stage(
                p, spec, rows, stage,
                [&](std::size_t n, std::size_t i) { return xs[i] - exit.slices[n][i]; }, keep);
            break;
        }
    }
    res.value0 = std::move(run.value0);
    res.frontier = std::move(run.frontier);
    res.slices = std::move(run.slices);
    return res;
}

}  // namespace

DpResult dp_value(const OUParams& p, const LatticeSpec& spec, Role stage, double fee,
                  const DpOptions& opts) {
    DpResult res = dp_once(p, spec, stage, fee, opts.keep_slices);
    if (opts.bounds_tol > 0.0) {
        LatticeSpec wide = spec;
        const double mid = 0.5 * (spec.x_min + spec.x_max);
        const double half = spec.x_max - spec.x_min;
        wide.x_min = mid - half;
        wide.x_max = mid + half;
        wide.n_space = 2 * (spec.n_space - 1) + 1;
        const DpResult w = dp_once(p, wide, stage, fee, false);
        const std::size_t lo = spec.n_space / 5, hi = spec.n_space - lo;
        double worst = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            worst = std::max(worst, std::abs(res.value0[i] - w.value_at(res.xs[i])));
        if (worst > opts.bounds_tol)
            throw BoundsTooTight("doubling the lattice range moved mid-domain values by " +
                                 std::to_string(worst));
    }
    return res;
}

}  // namespace ouspread
