#include "ouspread/app.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ouspread/io.hpp"
#include "ouspread/simulate.hpp"
#include "ouspread/validation.hpp"
#include "ouspread/value_surface.hpp"

namespace ouspread {

namespace {

namespace fs = std::filesystem;

constexpr int kInputError = 2;

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> strategy;
    std::optional<std::size_t> steps;
    std::optional<double> fee;
    std::optional<std::uint64_t> seed;
    std::optional<double> mu, theta, sigma, r, T;
    std::string quadrature = "gauss-sqrt";
    std::string out;
    std::string format = "csv";

    // value
    std::optional<std::string> boundaries;
    std::optional<std::string> role;
    std::optional<double> t, x;
    std::optional<std::size_t> t_points, x_points;
    std::optional<double> x_min, x_max;

    // simulate / validate
    std::size_t paths = 0;
    std::optional<double> x0;
    double t0 = 0.0;
    std::size_t substeps = 16;
    unsigned threads = 0;
    bool no_bridge = false;
    std::size_t lattice_time = 2000, lattice_space = 400;
    std::optional<std::string> diag;
};

void add_run_options(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd.add_option("--strategy", f.strategy, "long-short, short-long, chooser or cost-exit")
        ->check(CLI::IsMember({"long-short", "short-long", "chooser", "cost-exit"}));
    cmd.add_option("--steps", f.steps, "time steps on [0, T] (default 500)");
    cmd.add_option("--fee", f.fee, "transaction fee, cost-exit only (default 0)");
    cmd.add_option("--seed", f.seed, "master random seed (default 42)");
    cmd.add_option("--mu", f.mu, "mean-reversion speed");
    cmd.add_option("--theta", f.theta, "long-run mean");
    cmd.add_option("--sigma", f.sigma, "volatility");
    cmd.add_option("--r", f.r, "discount rate");
    cmd.add_option("--T", f.T, "horizon");
    cmd.add_option("--quadrature", f.quadrature, "gauss-sqrt (default) or right-rectangle")
        ->check(CLI::IsMember({"gauss-sqrt", "right-rectangle"}));
    cmd.add_option("--out", f.out, "output file (default stdout)");
}

RunConfig build_config(const Flags& f) {
    RunConfig cfg = f.config ? load_config(*f.config) : RunConfig{};
    const OUParams& p = cfg.params;
    cfg.params = OUParams(f.mu.value_or(p.mu()), f.theta.value_or(p.theta()),
                          f.sigma.value_or(p.sigma()), f.r.value_or(p.r()), f.T.value_or(p.T()));
    if (f.strategy) cfg.strategy = *parse_strategy(*f.strategy);
    if (f.steps) cfg.steps = *f.steps;
    if (f.fee) cfg.fee = *f.fee;
    if (f.seed) cfg.seed = *f.seed;
    if (f.t_points || f.x_points || f.x_min || f.x_max) {
        ValueGridSpec g = cfg.value_grid.value_or(ValueGridSpec{});
        g.t_points = f.t_points.value_or(g.t_points);
        g.x_points = f.x_points.value_or(g.x_points);
        g.x_min = f.x_min.value_or(g.x_min);
        g.x_max = f.x_max.value_or(g.x_max);
        cfg.value_grid = g;
    }
    cfg.validate();
    return cfg;
}

SolverOptions solver_options(const Flags& f) {
    SolverOptions o;
    o.rule = f.quadrature == "right-rectangle" ? QuadratureRule::RightRectangle
                                               : QuadratureRule::GaussSqrt;
    return o;
}

/// Boundaries from --boundaries when given, otherwise solved in-process.
StrategySolution obtain_solution(const RunConfig& cfg, const Flags& f) {
    if (f.boundaries) {
        auto sol = parse_boundary_csv(read_file(*f.boundaries), cfg.params, cfg.fee);
        if (f.strategy && sol.strategy != cfg.strategy)
            throw std::invalid_argument("--strategy " + *f.strategy + " does not match the columns of " +
                                        *f.boundaries);
        sol.rule = solver_options(f).rule;
        return sol;
    }
    return solve_strategy(cfg.params, TimeGrid(cfg.params.T(), cfg.steps), cfg.strategy, cfg.fee,
                          solver_options(f));
}

void emit(const Flags& f, std::ostream& out, const std::string& content) {
    if (f.out.empty()) out << content;
    else write_file(f.out, content);
}

std::string boundary_json(const StrategySolution& sol) {
    nlohmann::json j;
    j["strategy"] = std::string(to_string(sol.strategy));
    j["t"] = sol.grid().nodes();
    for (const auto& [role, b] : sol.boundaries)
        j[std::string(to_string(role))] = std::vector<double>(b.values().begin(), b.values().end());
    return j.dump(2) + "\n";
}

int cmd_solve(const Flags& f, std::ostream& out) {
    const RunConfig cfg = build_config(f);
    const auto sol = obtain_solution(cfg, f);
    emit(f, out, f.format == "json" ? boundary_json(sol) : boundary_csv(sol));
    std::optional<fs::path> diag;
    if (f.diag) diag = *f.diag;
    else if (!f.out.empty()) diag = fs::path(f.out).replace_extension(".diag.json");
    if (diag) write_file(*diag, diagnostics_json(sol));
    return 0;
}

ValueRole default_role(Strategy s) {
    switch (s) {
        case Strategy::LongShort: return ValueRole::EntryLong;
        case Strategy::ShortLong: return ValueRole::EntryShort;
        case Strategy::Chooser: return ValueRole::Chooser;
        case Strategy::CostExit: return ValueRole::CostExit;
    }
    return ValueRole::EntryLong;
}

int cmd_value(const Flags& f, std::ostream& out) {
    if (f.t.has_value() != f.x.has_value())
        throw std::invalid_argument("a point query needs both --t and --x");
    const RunConfig cfg = build_config(f);
    if (f.t && !(*f.t >= 0.0 && *f.t <= cfg.params.T()))
        throw std::out_of_range("--t " + format_number(*f.t) + " outside [0, " +
                                format_number(cfg.params.T()) + "]");
    if (f.x && !std::isfinite(*f.x)) throw std::out_of_range("--x must be finite");
    const auto sol = obtain_solution(cfg, f);
    ValueRole role = default_role(sol.strategy);
    if (f.role) {
        auto r = parse_value_role(*f.role);
        if (!r) throw std::invalid_argument("unknown role '" + *f.role + "'");
        role = *r;
    }
    const ValueEvaluator v(sol);
    if (f.t) {
        emit(f, out, format_number(v({*f.t, *f.x, role})) + "\n");
        return 0;
    }
    const ValueGridSpec g = cfg.value_grid.value_or(ValueGridSpec{});
    const auto surface = fill_surface(sol, role, linspace(0.0, cfg.params.T(), g.t_points),
                                      linspace(g.x_min, g.x_max, g.x_points));
    if (f.format == "json") {
        nlohmann::json j{{"role", std::string(to_string(role))},
                         {"t", surface.times},
                         {"x", surface.xs},
                         {"values", surface.values}};
        emit(f, out, j.dump(2) + "\n");
    } else {
        emit(f, out, value_csv(surface));
    }
    return 0;
}

int cmd_simulate(const Flags& f, std::ostream& out) {
    const RunConfig cfg = build_config(f);
    const auto sol = obtain_solution(cfg, f);
    SimOptions o;
    o.x0 = f.x0.value_or(cfg.params.theta());
    o.t0 = f.t0;
    o.substeps = f.substeps;
    o.threads = f.threads;
    o.bridge = !f.no_bridge;
    const auto rep = simulate_strategy(sol, f.paths, cfg.seed, o);
    emit(f, out, report_json(rep, simulated_target(sol, o.t0, o.x0)));
    return 0;
}

int cmd_validate(const Flags& f, std::ostream& out) {
    const RunConfig cfg = build_config(f);
    const auto sol = obtain_solution(cfg, f);
    ValidateOptions o;
    o.paths = f.paths;
    o.seed = cfg.seed;
    o.substeps = f.substeps;
    o.lattice_time = f.lattice_time;
    o.lattice_space = f.lattice_space;
    const auto rep = validate_solution(sol, o);
    emit(f, out, rep.json());
    return rep.passed() ? 0 : 1;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal entry and exit boundaries for mean-reverting spread trading"};
    app.name("ouspread");
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "solve the boundaries of a strategy and write them as CSV");
    add_run_options(*solve, f);
    solve->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--diag", f.diag, "diagnostics file (default: next to --out)");

    auto* value = app.add_subcommand("value", "evaluate a value function at a point or on a grid");
    add_run_options(*value, f);
    value->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    value->add_option("--boundaries", f.boundaries, "boundary CSV from a previous solve")
        ->check(CLI::ExistingFile);
    value->add_option("--role", f.role,
                      "exit_long, entry_long, exit_short, entry_short, chooser or cost_exit");
    value->add_option("--t", f.t, "query time");
    value->add_option("--x", f.x, "query spread");
    value->add_option("--t-points", f.t_points, "grid times on [0, T]");
    value->add_option("--x-points", f.x_points, "grid spreads");
    value->add_option("--x-min", f.x_min, "lowest grid spread");
    value->add_option("--x-max", f.x_max, "highest grid spread");

    auto* simulate = app.add_subcommand("simulate", "run the strategy's threshold rules on simulated paths");
    add_run_options(*simulate, f);
    simulate->add_option("--boundaries", f.boundaries, "boundary CSV from a previous solve")
        ->check(CLI::ExistingFile);
    simulate->add_option("--paths", f.paths, "number of paths")->default_val(10000);
    simulate->add_option("--x0", f.x0, "starting spread (default theta)");
    simulate->add_option("--t0", f.t0, "starting time")->default_val(0.0);
    simulate->add_option("--substeps", f.substeps, "simulation steps per grid step")->default_val(16);
    simulate->add_option("--threads", f.threads, "worker threads, 0 for all cores")->default_val(0);
    simulate->add_flag("--no-bridge", f.no_bridge, "check crossings only at simulation nodes");

    auto* validate = app.add_subcommand("validate", "check solved boundaries against the oracles");
    add_run_options(*validate, f);
    validate->add_option("--boundaries", f.boundaries, "boundary CSV to check instead of solving")
        ->check(CLI::ExistingFile);
    validate->add_option("--paths", f.paths, "simulated paths")->default_val(20000);
    validate->add_option("--substeps", f.substeps, "simulation steps per grid step")->default_val(16);
    validate->add_option("--lattice-time", f.lattice_time, "lattice time steps")->default_val(2000);
    validate->add_option("--lattice-space", f.lattice_space, "lattice spatial nodes")->default_val(400);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    // solver errors already name the failing time step
    try {
        if (solve->parsed()) return cmd_solve(f, out);
        if (value->parsed()) return cmd_value(f, out);
        if (simulate->parsed()) return cmd_simulate(f, out);
        return cmd_validate(f, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace ouspread
