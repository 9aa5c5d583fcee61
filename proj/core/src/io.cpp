#include "ouspread/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace ouspread {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

double get_number(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) bad(std::string("config key '") + key + "' must be a number");
    return v.get<double>();
}

std::size_t get_count(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) bad(std::string("config key '") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

KernelTag tag_of(Role r) {
    switch (r) {
        case Role::ExitLong: return KernelTag::ExitLong;
        case Role::EntryLong: return KernelTag::EntryLong;
        case Role::ExitShort: return KernelTag::ExitShort;
        case Role::EntryShort: return KernelTag::EntryShort;
        case Role::CostExit: return KernelTag::ExitLongWithCost;
    }
    bad("unknown role");
}

/// Grid times keep a decimal point so the column reads as time ("1.0", not "1").
std::string format_time(double t) {
    std::string s = format_number(t);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    if (steps < 2) bad("steps must be >= 2");
    if (!(fee >= 0.0) || !std::isfinite(fee)) bad("fee must be finite and >= 0");
    if (fee > 0.0 && strategy != Strategy::CostExit)
        bad("a positive fee is only valid with the cost-exit strategy");
    if (value_grid) {
        if (value_grid->t_points < 1 || value_grid->x_points < 1)
            bad("value grid needs at least one point per axis");
        if (!(value_grid->x_max >= value_grid->x_min)) bad("value grid needs x_min <= x_max");
    }
}

RunConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("config must be a JSON object");
    static const std::set<std::string> known{"mu",    "theta",    "sigma", "r",   "T",
                                             "steps", "strategy", "fee",   "seed", "value_grid"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) bad("unknown config key '" + key + "'");

    const OUParams ref = OUParams::reference();
    auto num = [&](const char* key, double fallback) {
        return j.contains(key) ? get_number(j, key) : fallback;
    };
    RunConfig cfg;
    cfg.params = OUParams(num("mu", ref.mu()), num("theta", ref.theta()), num("sigma", ref.sigma()),
                          num("r", ref.r()), num("T", ref.T()));
    if (j.contains("steps")) cfg.steps = get_count(j, "steps");
    if (j.contains("strategy")) {
        const auto& s = j.at("strategy");
        if (!s.is_string()) bad("config key 'strategy' must be a string");
        auto parsed = parse_strategy(s.get<std::string>());
        if (!parsed) bad("unknown strategy '" + s.get<std::string>() + "'");
        cfg.strategy = *parsed;
    }
    cfg.fee = num("fee", 0.0);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) bad("config key 'seed' must be a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("value_grid")) {
        const auto& g = j.at("value_grid");
        if (!g.is_object()) bad("config key 'value_grid' must be an object");
        ValueGridSpec v;
        if (g.contains("t_points")) v.t_points = get_count(g, "t_points");
        if (g.contains("x_points")) v.x_points = get_count(g, "x_points");
        if (g.contains("x_min")) v.x_min = get_number(g, "x_min");
        if (g.contains("x_max")) v.x_max = get_number(g, "x_max");
        cfg.value_grid = v;
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string config_json(const RunConfig& cfg) {
    json j{{"mu", cfg.params.mu()},
           {"theta", cfg.params.theta()},
           {"sigma", cfg.params.sigma()},
           {"r", cfg.params.r()},
           {"T", cfg.params.T()},
           {"steps", cfg.steps},
           {"strategy", std::string(to_string(cfg.strategy))},
           {"fee", cfg.fee},
           {"seed", cfg.seed}};
    if (cfg.value_grid)
        j["value_grid"] = {{"t_points", cfg.value_grid->t_points},
                           {"x_min", cfg.value_grid->x_min},
                           {"x_max", cfg.value_grid->x_max},
                           {"x_points", cfg.value_grid->x_points}};
    return j.dump(2) + "\n";
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
        s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        bad("not a number: '" + std::string(s) + "'");
    return v;
}

std::string boundary_csv(const StrategySolution& sol) {
    const auto& grid = sol.grid();
    std::string out = "t";
    for (const auto& [role, _] : sol.boundaries) out += "," + std::string(to_string(role));
    out += "\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out += format_time(grid.node(k));
        for (const auto& [_, b] : sol.boundaries) out += "," + format_number(b[k]);
        out += "\n";
    }
    return out;
}

StrategySolution parse_boundary_csv(std::string_view text, const OUParams& p, double fee) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) bad("boundary file is empty");
    const auto header = split(lines[0], ',');
    if (header.empty() || header[0] != "t") bad("boundary file must start with a 't' column");
    std::vector<Role> roles;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto r = parse_role(header[c]);
        if (!r) bad("unknown boundary column '" + std::string(header[c]) + "'");
        roles.push_back(*r);
    }
    const std::set<Role> have(roles.begin(), roles.end());
    if (have.size() != roles.size()) bad("duplicate boundary column");

    std::optional<Strategy> strategy;
    for (Strategy s : {Strategy::LongShort, Strategy::ShortLong, Strategy::Chooser, Strategy::CostExit}) {
        const auto need = roles_of(s);
        if (std::set<Role>(need.begin(), need.end()) == have) strategy = s;
    }
    if (!strategy) bad("boundary columns do not match any strategy");

    if (lines.size() < 4) bad("boundary file needs at least 3 grid rows");
    const TimeGrid grid(p.T(), lines.size() - 2);
    std::vector<std::vector<double>> cols(roles.size(), std::vector<double>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto cells = split(lines[k + 1], ',');
        if (cells.size() != header.size())
            bad("row " + std::to_string(k + 1) + " has " + std::to_string(cells.size()) +
                " cells, expected " + std::to_string(header.size()));
        const double t = parse_number(cells[0]);
        if (std::abs(t - grid.node(k)) > 1e-9 * std::max(1.0, p.T()))
            bad("row " + std::to_string(k + 1) + " has t = " + std::string(cells[0]) +
                ", expected a uniform grid ending at T");
        for (std::size_t c = 0; c < roles.size(); ++c) cols[c][k] = parse_number(cells[c + 1]);
    }
    std::map<Role, Boundary> boundaries;
    for (std::size_t c = 0; c < roles.size(); ++c)
        boundaries.emplace(roles[c], Boundary(grid, std::move(cols[c]), tag_of(roles[c]),
                                              roles[c] == Role::CostExit ? fee : 0.0));
    return assemble_solution(p, *strategy, *strategy == Strategy::CostExit ? fee : 0.0,
                             std::move(boundaries));
}

std::string value_csv(const ValueSurface& s) {
    std::string out = "x\\t";
    for (double t : s.times) out += ",t=" + format_number(t);
    out += "\n";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
        out += format_number(s.xs[i]);
        for (double v : s.values[i]) out += "," + format_number(v);
        out += "\n";
    }
    return out;
}

std::string diagnostics_json(const StrategySolution& sol) {
    json roles = json::object();
    for (const auto& [role, d] : sol.diagnostics) {
        int worst = 0;
        for (int e : d.evaluations) worst = std::max(worst, e);
        roles[std::string(to_string(role))] = {{"total_evaluations", d.total_evaluations()},
                                               {"max_evaluations_per_node", worst},
                                               {"max_residual", d.max_residual()},
                                               {"clamped_nodes", d.clamped_nodes},
                                               {"evaluations", d.evaluations}};
    }
    json j{{"strategy", std::string(to_string(sol.strategy))},
           {"steps", sol.grid().n_steps()},
           {"fee", sol.fee},
           {"quadrature", sol.rule == QuadratureRule::GaussSqrt ? "gauss-sqrt" : "right-rectangle"},
           {"roles", roles}};
    return j.dump(2) + "\n";
}

std::string report_json(const SimReport& r, double target) {
    json j{{"n_paths", r.n_paths},
           {"mean_payoff", r.mean_payoff},
           {"std_error", r.std_error},
           {"entry_rate", r.entry_rate},
           {"mean_entry_time", r.mean_entry_time},
           {"mean_exit_time", r.mean_exit_time},
           {"solver_value", target},
           {"z_score", r.std_error > 0.0 ? (r.mean_payoff - target) / r.std_error : 0.0}};
    return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ouspread
