#include <cmath>

#include <gtest/gtest.h>

#include "ouspread/boundary.hpp"

using namespace ouspread;

TEST(TimeGrid, NodesAndLocate) {
    const TimeGrid g(1.0, 500);
    EXPECT_EQ(g.size(), 501u);
    EXPECT_EQ(g.node(0), 0.0);
    EXPECT_EQ(g.node(500), 1.0);
    EXPECT_EQ(g.node(250), 0.5);
    for (std::size_t k = 0; k < 500; ++k) {
        EXPECT_EQ(g.locate(g.node(k)), k);
        EXPECT_EQ(g.locate(0.5 * (g.node(k) + g.node(k + 1))), k);
    }
    EXPECT_EQ(g.locate(1.0), 500u);
    EXPECT_THROW(g.locate(-1e-12), std::out_of_range);
    EXPECT_THROW(g.locate(1.0 + 1e-12), std::out_of_range);
    EXPECT_THROW(g.node(501), std::out_of_range);
    EXPECT_THROW(TimeGrid(1.0, 1), std::invalid_argument);
    EXPECT_THROW(TimeGrid(0.0, 10), std::invalid_argument);
}

TEST(Boundary, InterpolatesLinearlyInRootTimeToGo) {
    const TimeGrid g(1.0, 4);
    // b(t) = sqrt(1 - t) is reproduced exactly between nodes
    std::vector<double> v;
    for (double t : g.nodes()) v.push_back(std::sqrt(1.0 - t));
    const Boundary b(g, v, KernelTag::ExitLong);
    for (double t : {0.1, 0.3, 0.61, 0.8, 0.99, 1.0}) EXPECT_NEAR(b.at(t), std::sqrt(1.0 - t), 1e-15);
    EXPECT_EQ(b.at(0.25), v[1]);
    EXPECT_EQ(b.terminal(), 0.0);
    EXPECT_THROW(b.at(1.5), std::out_of_range);
    EXPECT_NEAR(interpolation_weight(g, 0, 0.0), 0.0, 1e-16);
    EXPECT_NEAR(interpolation_weight(g, 0, 0.25), 1.0, 1e-15);
}

TEST(Boundary, ValidatesConstruction) {
    const TimeGrid g(1.0, 2);
    EXPECT_THROW(Boundary(g, {0.0, 0.0}, KernelTag::ExitLong), std::invalid_argument);
    EXPECT_THROW(Boundary(g, {0.0, 0.0, 0.0}, KernelTag::ExitLong, 0.1), std::invalid_argument);
    EXPECT_NO_THROW(Boundary(g, {0.0, 0.0, 0.0}, KernelTag::ExitLongWithCost, 0.1));
}

TEST(Boundary, FindsMonotonicityBreaks) {
    const TimeGrid g(1.0, 3);
    EXPECT_FALSE(Boundary(g, {0.3, 0.2, 0.1, 0.0}, KernelTag::ExitLong).monotonicity_violation());
    EXPECT_EQ(*Boundary(g, {0.3, 0.2, 0.25, 0.0}, KernelTag::ExitLong).monotonicity_violation(), 1u);
    EXPECT_FALSE(Boundary(g, {-0.3, -0.2, -0.1, 0.0}, KernelTag::EntryLong).monotonicity_violation());
    EXPECT_EQ(*Boundary(g, {-0.3, -0.35, -0.1, 0.0}, KernelTag::EntryLong).monotonicity_violation(), 0u);
    EXPECT_TRUE(is_nonincreasing(KernelTag::EntryShort));
    EXPECT_FALSE(is_nonincreasing(KernelTag::ExitShort));
    EXPECT_EQ(to_string(KernelTag::ExitLongWithCost), "cost_exit");
}
