#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/legendre.hpp>
#include <gtest/gtest.h>

#include "ouspread/errors.hpp"
#include "ouspread/lattice.hpp"
#include "ouspread/value_surface.hpp"
#include "support.hpp"

using namespace ouspread;
using ouspread::testing::reference_solution;

TEST(GaussLegendre, MatchesReferenceNodesAndWeights) {
    for (int n : {2, 5, 16, 64}) {
        const auto rule = gauss_legendre(static_cast<std::size_t>(n));
        ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(n));
        // boost lists the nonnegative zeros in ascending order
        const auto zeros = boost::math::legendre_p_zeros<double>(n);
        for (std::size_t j = 0; j < zeros.size(); ++j) {
            const double z = zeros[j];
            const std::size_t idx = static_cast<std::size_t>(n / 2) + j;
            EXPECT_NEAR(rule.nodes[idx], z, 1e-15) << n;
            const double dp = boost::math::legendre_p_prime(n, z);
            const double w = 2.0 / ((1.0 - z * z) * dp * dp);
            EXPECT_NEAR(rule.weights[idx], w, 1e-14) << n;
        }
        double sum = 0.0;
        for (double w : rule.weights) sum += w;
        EXPECT_NEAR(sum, 2.0, 1e-14);
        EXPECT_TRUE(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    }
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const auto rule = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14) << k;
    }
}

TEST(LatticeSpec, CoversEightDeviations) {
    const auto p = OUParams::reference().with_theta(0.01);
    const auto s = LatticeSpec::covering(p, 100, 201);
    EXPECT_NEAR(s.x_min, 0.01 - 8 * p.stationary_sd(), 1e-15);
    EXPECT_NEAR(s.x_max, 0.01 + 8 * p.stationary_sd(), 1e-15);
    EXPECT_EQ(s.x(0), s.x_min);
    EXPECT_NEAR(s.x(200), s.x_max, 1e-15);
    EXPECT_NEAR(s.x(100), 0.01, 1e-15);
    LatticeSpec bad = s;
    bad.n_space = 3;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = s;
    bad.x_max = bad.x_min;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Lattice, LastSliceIsThePayoff) {
    const auto p = OUParams::reference();
    const auto spec = LatticeSpec::covering(p, 50, 101);
    DpOptions o;
    o.keep_slices = true;
    const auto exit = dp_value(p, spec, Role::ExitLong, 0.0, o);
    ASSERT_EQ(exit.slices.size(), 51u);
    for (std::size_t i = 0; i < spec.n_space; ++i) EXPECT_EQ(exit.slices.back()[i], exit.xs[i]);
    const auto cost = dp_value(p, spec, Role::CostExit, 0.01, o);
    for (std::size_t i = 0; i < spec.n_space; ++i)
        EXPECT_EQ(cost.slices.back()[i], cost.xs[i] - 0.01);
    const auto entry = dp_value(p, spec, Role::EntryLong, 0.0, o);
    for (double v : entry.slices.back()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(exit.time(50), 1.0);
    EXPECT_THROW(dp_value(p, spec, Role::ExitLong, 0.01), std::invalid_argument);
}

TEST(Lattice, ZeroMeanMirrorsShortAndLong) {
    const auto p = OUParams::reference();
    const auto spec = LatticeSpec::covering(p, 200, 201);
    const auto L = dp_value(p, spec, Role::ExitLong);
    const auto S = dp_value(p, spec, Role::ExitShort);
    const auto EL = dp_value(p, spec, Role::EntryLong);
    const auto ES = dp_value(p, spec, Role::EntryShort);
    const std::size_t n = spec.n_space;
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(S.value0[i], -L.value0[n - 1 - i], 1e-12);
        EXPECT_NEAR(ES.value0[i], EL.value0[n - 1 - i], 1e-12);
    }
}

TEST(Lattice, ValuesDominatePayoffAndStopOnTheRightSide) {
    const auto p = OUParams::reference();
    const auto spec = LatticeSpec::covering(p, 200, 201);
    const auto L = dp_value(p, spec, Role::ExitLong);
    for (std::size_t i = 0; i < spec.n_space; ++i) EXPECT_GE(L.value0[i], L.xs[i]);
    for (std::size_t n = 0; n + 1 < spec.n_time; ++n) {
        ASSERT_TRUE(L.frontier[n]);
        EXPECT_NEAR(L.frontier[n]->stop - L.frontier[n]->cont, spec.dx(), 1e-12);
    }
}

TEST(Lattice, AgreesWithTheIntegralRepresentation) {
    const auto& sol = reference_solution(Strategy::LongShort);
    const ValueEvaluator v(sol);
    const auto spec = LatticeSpec::covering(sol.params, 1000, 201);
    for (Role role : {Role::ExitLong, Role::EntryLong}) {
        const auto dp = dp_value(sol.params, spec, role);
        for (std::size_t i = 40; i < 161; ++i)
            EXPECT_NEAR(dp.value0[i], v({0.0, dp.xs[i], value_role(role)}), 1e-3);
        EXPECT_NEAR(dp.value_at(0.0), v({0.0, 0.0, value_role(role)}), 1e-3);
    }
}

TEST(Lattice, NarrowDomainIsRejected) {
    const auto p = OUParams::reference();
    DpOptions o;
    o.bounds_tol = 1e-6;
    auto narrow = LatticeSpec::covering(p, 100, 41, 1.5);
    EXPECT_THROW(dp_value(p, narrow, Role::ExitLong, 0.0, o), BoundsTooTight);
    auto wide = LatticeSpec::covering(p, 100, 201);
    EXPECT_NO_THROW(dp_value(p, wide, Role::ExitLong, 0.0, o));
}
