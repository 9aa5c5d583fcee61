#include "ouspread/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ouspread/value_surface.hpp"

namespace ouspread {

namespace {

struct PathResult {
    double payoff;
    double entry_time;
    double exit_time;
    bool entered;
};

/// Boundaries and discount factors sampled on the simulation nodes t_j, j = 0..M.
struct SimGrid {
    std::vector<double> times;
    std::vector<double> discount;  // e^{-r (t_j - t0)}
    StepLaw law;
    std::vector<double> first;     // entry side (or the only boundary)
    std::vector<double> second;    // exit side
};

std::vector<double> sample(const Boundary& b, const std::vector<double>& times) {
    std::vector<double> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) out[j] = b.at(times[j]);
    return out;
}

SimGrid make_grid(const StrategySolution& sol, const SimOptions& opts) {
    const auto& p = sol.params;
    const auto& grid = sol.grid();
    const double width = p.T() - opts.t0;
    const double target = grid.h() / static_cast<double>(opts.substeps);
    const auto m = static_cast<std::size_t>(std::ceil(width / target - 1e-9));

    SimGrid g;
    g.times.resize(m + 1);
    for (std::size_t j = 0; j < m; ++j)
        g.times[j] = opts.t0 + width * static_cast<double>(j) / static_cast<double>(m);
    g.times[m] = p.T();
    g.discount.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) g.discount[j] = std::exp(-p.r() * (g.times[j] - opts.t0));
    g.law = step_law(p, m > 0 ? width / static_cast<double>(m) : 0.0);

    switch (sol.strategy) {
        case Strategy::LongShort:
            g.first = sample(sol.boundary(Role::EntryLong), g.times);
            g.second = sample(sol.boundary(Role::ExitLong), g.times);
            break;
        case Strategy::ShortLong:
            g.first = sample(sol.boundary(Role::EntryShort), g.times);
            g.second = sample(sol.boundary(Role::ExitShort), g.times);
            break;
        case Strategy::Chooser:
            g.first = sample(sol.boundary(Role::ExitLong), g.times);
            g.second = sample(sol.boundary(Role::ExitShort), g.times);
            break;
        case Strategy::CostExit:
            g.first = sample(sol.boundary(Role::CostExit), g.times);
            break;
    }
    return g;
}

/// A threshold rule: stop once the path is at or beyond level[j] on the given side.
struct Rule {
    const std::vector<double>& level;
    bool above;

    bool stops(std::size_t j, double x) const { return above ? x >= level[j] : x <= level[j]; }
    /// Distance to the level, positive on the continuation side.
    double gap(std::size_t j, double x) const { return above ? level[j] - x : x - level[j]; }
};

struct Fired {
    std::size_t node;
    double paid;  ///< spread the rule settles at
    bool early;   ///< fired before being forced at T
};

class Walker {
public:
    Walker(const SimGrid& g, Rng& rng, bool bridge) : g_(g), rng_(rng), bridge_(bridge) {}

    std::size_t last() const { return g_.times.size() - 1; }

    double step(double x) { return sample_transition(g_.law, x, normal_, rng_); }

    /// Whether the path crossed r's level between nodes j and j + 1. Between nodes the
    /// path is treated as a Brownian bridge against a linearly interpolated level.
    bool crossed(const Rule& r, std::size_t j, double x, double y) {
        if (r.stops(j + 1, y)) return true;
        if (!bridge_) return false;
        const double a = 2.0 * r.gap(j, x) * r.gap(j + 1, y) / (g_.law.sd * g_.law.sd);
        if (a > 40.0) return false;
        return uniform_(rng_) < std::exp(-a);
    }

    /// Level paid when r fires on arrival at node j with the path at y.
    double settle(const Rule& r, std::size_t j, double y) const { return bridge_ ? r.level[j] : y; }

    /// Runs the path from (j, x) until r fires; x ends as the path value at the firing node.
    Fired advance(const Rule& r, std::size_t j, double& x) {
        if (r.stops(j, x)) return {j, x, j < last()};
        while (j < last()) {
            const double y = step(x);
            const bool hit = crossed(r, j, x, y);
            x = y;
            ++j;
            if (hit) return {j, settle(r, j, y), true};
        }
        return {j, x, false};
    }

private:
    const SimGrid& g_;
    Rng& rng_;
    bool bridge_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

/// Enter on `in`, then exit on `out`; sign +1 buys at entry.
PathResult two_stage(const SimGrid& g, Walker& w, double x, double sign, const Rule& in,
                     const Rule& out) {
    const Fired a = w.advance(in, 0, x);
    const Fired b = w.advance(out, a.node, x);
    const double pay = sign * (g.discount[b.node] * b.paid - g.discount[a.node] * a.paid);
    return {pay, g.times[a.node], g.times[b.node], a.early};
}

PathResult chooser_path(const SimGrid& g, Walker& w, double x) {
    const Rule sell{g.first, true}, buy{g.second, false};
    const std::size_t m = w.last();
    std::optional<Fired> s, b;
    if (sell.stops(0, x)) s = Fired{0, x, m > 0};
    if (buy.stops(0, x)) b = Fired{0, x, m > 0};
    for (std::size_t j = 0; j < m && !(s && b); ++j) {
        const double y = w.step(x);
        if (!s && w.crossed(sell, j, x, y)) s = Fired{j + 1, w.settle(sell, j + 1, y), true};
        if (!b && w.crossed(buy, j, x, y)) b = Fired{j + 1, w.settle(buy, j + 1, y), true};
        x = y;
    }
    if (!s) s = Fired{m, x, false};
    if (!b) b = Fired{m, x, false};
    const double pay = g.discount[s->node] * s->paid - g.discount[b->node] * b->paid;
    const Fired& first = s->node <= b->node ? *s : *b;
    return {pay, g.times[first.node], g.times[std::max(s->node, b->node)], first.early};
}

PathResult run_path(const StrategySolution& sol, const SimGrid& g, const SimOptions& opts,
                    Rng& rng) {
    Walker w(g, rng, opts.bridge);
    switch (sol.strategy) {
        case Strategy::LongShort:
            return two_stage(g, w, opts.x0, 1.0, Rule{g.first, false}, Rule{g.second, true});
        case Strategy::ShortLong:
            return two_stage(g, w, opts.x0, -1.0, Rule{g.first, true}, Rule{g.second, false});
        case Strategy::Chooser:
            return chooser_path(g, w, opts.x0);
        case Strategy::CostExit: {
            double x = opts.x0;
            const Fired f = w.advance(Rule{g.first, true}, 0, x);
            return {g.discount[f.node] * (f.paid - sol.fee), g.times[0], g.times[f.node], true};
        }
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace

SimReport simulate_strategy(const StrategySolution& sol, std::size_t n_paths, std::uint64_t seed,
                            const SimOptions& opts) {
    if (n_paths == 0) throw std::invalid_argument("simulation needs at least one path");
    if (opts.substeps == 0) throw std::invalid_argument("substeps must be >= 1");
    if (!std::isfinite(opts.x0)) throw std::invalid_argument("start spread must be finite");
    if (!(opts.t0 >= 0.0 && opts.t0 <= sol.params.T()))
        throw std::out_of_range("start time outside [0, T]");

    const SimGrid g = make_grid(sol, opts);
    std::vector<PathResult> paths(n_paths);
    unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_paths));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng(derive_seed(seed, i));
            paths[i] = run_path(sol, g, opts, rng);
        }
    };
    if (workers <= 1) {
        work(0, n_paths);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n_paths + workers - 1) / workers;
        for (std::size_t b = 0; b < n_paths; b += chunk)
            pool.emplace_back(work, b, std::min(n_paths, b + chunk));
    }

    // in path order, so the sums do not depend on the worker split
    SimReport rep;
    rep.n_paths = n_paths;
    double sum = 0.0, entered = 0.0, t_in = 0.0, t_out = 0.0;
    for (const auto& r : paths) {
        sum += r.payoff;
        entered += r.entered ? 1.0 : 0.0;
        t_in += r.entry_time;
        t_out += r.exit_time;
    }
    const double n = static_cast<double>(n_paths);
    rep.mean_payoff = sum / n;
    double ss = 0.0;
    for (const auto& r : paths) ss += (r.payoff - rep.mean_payoff) * (r.payoff - rep.mean_payoff);
    rep.std_error = n_paths > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    rep.entry_rate = entered / n;
    rep.mean_entry_time = t_in / n;
    rep.mean_exit_time = t_out / n;
    return rep;
}

double simulated_target(const StrategySolution& sol, double t0, double x0) {
    const ValueEvaluator v(sol);
    switch (sol.strategy) {
        case Strategy::LongShort: return v.entry_long(t0, x0);
        case Strategy::ShortLong: return v.entry_short(t0, x0);
        case Strategy::Chooser: return v.chooser(t0, x0);
        case Strategy::CostExit: return v.cost_exit(t0, x0);
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace ouspread
