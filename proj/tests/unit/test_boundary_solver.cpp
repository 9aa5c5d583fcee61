#include <cmath>

#include <gtest/gtest.h>

#include "ouspread/errors.hpp"
#include "support.hpp"

using namespace ouspread;
using ouspread::testing::reference_solution;

namespace {

double max_abs_sum(const Boundary& a, const Boundary& b) {
    double w = 0.0;
    for (std::size_t k = 0; k < a.grid().size(); ++k) w = std::max(w, std::abs(a[k] + b[k]));
    return w;
}

}  // namespace

TEST(Solver, TerminalValuesAreExact) {
    const auto p = OUParams::reference();
    EXPECT_EQ(reference_solution(Strategy::LongShort).boundary(Role::ExitLong).terminal(), 0.0);
    EXPECT_EQ(reference_solution(Strategy::LongShort).boundary(Role::EntryLong).terminal(), 0.0);
    EXPECT_EQ(reference_solution(Strategy::ShortLong).boundary(Role::ExitShort).terminal(), 0.0);
    EXPECT_EQ(reference_solution(Strategy::ShortLong).boundary(Role::EntryShort).terminal(), 0.0);
    EXPECT_EQ(reference_solution(Strategy::CostExit, 500, 0.02).boundary(Role::CostExit).terminal(),
              p.r() * 0.02 / (p.mu() + p.r()));

    const auto q = p.with_theta(0.1);
    const auto b = solve_exit_long(q, TimeGrid(1.0, 20));
    EXPECT_EQ(b.terminal(), q.mu() * q.theta() / (q.mu() + q.r()));
}

TEST(Solver, NodesSolveTheirEquations) {
    for (Strategy s : {Strategy::LongShort, Strategy::ShortLong}) {
        const auto& sol = reference_solution(s);
        for (const auto& [role, d] : sol.diagnostics) {
            EXPECT_LE(d.max_residual(), 1e-10) << to_string(role);
            EXPECT_EQ(d.clamped_nodes, 0);
            EXPECT_EQ(d.evaluations.size(), 501u);
            EXPECT_GT(d.total_evaluations(), 500);
        }
    }
}

TEST(Solver, LongBoundariesHaveTheExpectedShape) {
    const auto& sol = reference_solution(Strategy::LongShort);
    const Boundary& exit = sol.boundary(Role::ExitLong);
    const Boundary& entry = sol.boundary(Role::EntryLong);
    for (std::size_t k = 0; k < 500; ++k) {
        EXPECT_GT(exit[k], exit[k + 1]);
        EXPECT_LT(entry[k], entry[k + 1]);
        EXPECT_LT(entry[k], 0.0);
        EXPECT_GT(exit[k], 0.0);
    }
    // b(0) is well inside one stationary deviation
    EXPECT_NEAR(exit[0], 0.062, 2e-3);
    EXPECT_NEAR(entry[0], -0.051, 2e-3);
}

TEST(Solver, ZeroMeanMirrorsLongAndShort) {
    const auto& ls = reference_solution(Strategy::LongShort);
    const auto& sl = reference_solution(Strategy::ShortLong);
    EXPECT_LE(max_abs_sum(ls.boundary(Role::ExitLong), sl.boundary(Role::ExitShort)), 1e-8);
    EXPECT_LE(max_abs_sum(ls.boundary(Role::EntryLong), sl.boundary(Role::EntryShort)), 1e-8);
}

TEST(Solver, ZeroFeeReproducesTheExitBoundary) {
    const auto p = OUParams::reference();
    const TimeGrid g(1.0, 100);
    const auto plain = solve_exit_long(p, g);
    const auto cost = solve_exit_long_cost(p, g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(plain[k], cost[k]);
}

TEST(Solver, FeeRaisesTheExitBoundary) {
    const auto& plain = reference_solution(Strategy::LongShort).boundary(Role::ExitLong);
    const auto& cost = reference_solution(Strategy::CostExit, 500, 0.02).boundary(Role::CostExit);
    for (std::size_t k = 0; k < 501; ++k) EXPECT_GT(cost[k], plain[k]);
    EXPECT_FALSE(cost.monotonicity_violation());
}

TEST(Solver, SmallestGridWorks) {
    const auto p = OUParams::reference();
    const auto sol = solve_strategy(p, TimeGrid(1.0, 2), Strategy::Chooser);
    const auto& b = sol.boundary(Role::ExitLong);
    EXPECT_EQ(b.values().size(), 3u);
    EXPECT_GT(b[0], b[1]);
    EXPECT_EQ(b[2], 0.0);
}

TEST(Solver, ConvergesUnderRefinement) {
    const auto p = OUParams::reference();
    const auto a = solve_exit_long(p, TimeGrid(1.0, 100));
    const auto b = solve_exit_long(p, TimeGrid(1.0, 200));
    double gap = 0.0;
    for (std::size_t k = 0; k <= 100; ++k) gap = std::max(gap, std::abs(a[k] - b[2 * k]));
    EXPECT_LT(gap, 1e-4);
}

TEST(Solver, RectangleRuleNamesTheFailingStep) {
    const auto p = OUParams::reference();
    SolverOptions o;
    o.rule = QuadratureRule::RightRectangle;
    try {
        solve_exit_long(p, TimeGrid(1.0, 100), nullptr, o);
        FAIL() << "expected the rectangle rule to dip below its successor";
    } catch (const NonMonotone& e) {
        EXPECT_EQ(e.step(), 98u);
        EXPECT_NE(std::string(e.what()).find("t = 0.98"), std::string::npos);
    }
}

TEST(Strategies, NamesAndRoles) {
    EXPECT_EQ(*parse_strategy("cost-exit"), Strategy::CostExit);
    EXPECT_FALSE(parse_strategy("long"));
    EXPECT_EQ(*parse_role("exit-long"), Role::ExitLong);
    EXPECT_EQ(*parse_role("entry_short"), Role::EntryShort);
    EXPECT_EQ(roles_of(Strategy::Chooser), (std::vector<Role>{Role::ExitLong, Role::ExitShort}));
    const auto p = OUParams::reference();
    EXPECT_THROW(solve_strategy(p, TimeGrid(1.0, 10), Strategy::LongShort, 0.01),
                 std::invalid_argument);
    const auto& sol = reference_solution(Strategy::LongShort);
    EXPECT_THROW(sol.boundary(Role::ExitShort), std::invalid_argument);
}

TEST(Strategies, ChooserReusesTheExitBoundaries) {
    const auto& ch = reference_solution(Strategy::Chooser);
    const auto& ls = reference_solution(Strategy::LongShort);
    const auto& sl = reference_solution(Strategy::ShortLong);
    for (std::size_t k = 0; k < 501; ++k) {
        EXPECT_EQ(ch.boundary(Role::ExitLong)[k], ls.boundary(Role::ExitLong)[k]);
        EXPECT_EQ(ch.boundary(Role::ExitShort)[k], sl.boundary(Role::ExitShort)[k]);
    }
}
