#include <cmath>
#include <limits>
#include <set>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "ouspread/ou_process.hpp"

using namespace ouspread;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

const OUParams kP(16.0, 0.05, 0.16, 0.01, 1.0);

big big_mean(double u, double x) {
    const big e = exp(-big(kP.mu()) * big(u));
    return big(x) * e + big(kP.theta()) * (1 - e);
}

big big_var(double u) {
    const big s = big(kP.sigma());
    return s * s / (2 * big(kP.mu())) * (1 - exp(-2 * big(kP.mu()) * big(u)));
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

}  // namespace

TEST(OUParams, RejectsInvalidValues) {
    EXPECT_THROW(OUParams(0.0, 0.0, 0.16, 0.01, 1.0), std::invalid_argument);
    EXPECT_THROW(OUParams(16.0, 0.0, -1.0, 0.01, 1.0), std::invalid_argument);
    EXPECT_THROW(OUParams(16.0, 0.0, 0.16, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(OUParams(16.0, 0.0, 0.16, 0.01, 0.0), std::invalid_argument);
    EXPECT_THROW(OUParams(16.0, std::nan(""), 0.16, 0.01, 1.0), std::invalid_argument);
    const auto p = OUParams::reference();
    EXPECT_EQ(p.mu(), 16.0);
    EXPECT_EQ(p.theta(), 0.0);
    EXPECT_EQ(p.sigma(), 0.16);
    EXPECT_EQ(p.r(), 0.01);
    EXPECT_EQ(p.T(), 1.0);
}

TEST(Transition, MatchesHighPrecisionFormulas) {
    for (double u : {1e-10, 1e-6, 1e-3, 0.05, 0.5, 3.0})
        for (double x : {-0.3, 0.0, 0.05, 0.21}) {
            const double m = static_cast<double>(big_mean(u, x));
            const double v = static_cast<double>(big_var(u));
            EXPECT_NEAR(transition_mean(kP, u, x), m, 4e-16 * std::max(1.0, std::abs(m)));
            EXPECT_NEAR(transition_var(kP, u), v, 1e-14 * v) << "u = " << u;
        }
}

TEST(Transition, LimitsAndErrors) {
    EXPECT_EQ(transition_mean(kP, 0.0, 0.3), 0.3);
    EXPECT_EQ(transition_var(kP, 0.0), 0.0);
    EXPECT_NEAR(transition_var(kP, 50.0), kP.stationary_var(), 1e-18);
    EXPECT_NEAR(transition_mean(kP, 50.0, 0.3), kP.theta(), 1e-15);
    EXPECT_THROW(transition_mean(kP, -1e-3, 0.0), std::invalid_argument);
    EXPECT_THROW(transition_var(kP, -1.0), std::invalid_argument);
    EXPECT_THROW(transition_pdf(kP, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(Transition, DensityIntegratesToLaw) {
    const double u = 0.01, x = 0.1;
    const auto law = transition_law(kP, u, x);
    const double a = law.mean - 12 * law.sd(), b = law.mean + 12 * law.sd();
    EXPECT_NEAR(integrate([&](double y) { return transition_pdf(kP, u, x, y); }, a, b), 1.0, 1e-13);
    EXPECT_NEAR(integrate([&](double y) { return y * transition_pdf(kP, u, x, y); }, a, b),
                law.mean, 1e-14);
}

TEST(Normal, TailsStayAccurate) {
    for (double z : {-30.0, -10.0, -1.0, 0.0, 0.7, 8.0, 37.0}) {
        const double sf = 0.5 * boost::math::erfc(z / std::sqrt(2.0));
        EXPECT_NEAR(normal_sf(z), sf, 1e-15 * sf) << z;
        EXPECT_NEAR(normal_cdf(-z), sf, 1e-15 * sf) << z;
    }
    EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-17);
}

TEST(TruncatedMoments, MatchQuadrature) {
    for (double u : {1e-4, 0.02, 0.4})
        for (double x : {-0.1, 0.0, 0.08})
            for (double zoff : {-2.5, -0.3, 0.0, 1.1, 4.0}) {
                const auto law = transition_law(kP, u, x);
                const double z = law.mean + zoff * law.sd();
                const double lo = law.mean - 14 * law.sd(), hi = law.mean + 14 * law.sd();
                auto pdf = [&](double y) { return transition_pdf(kP, u, x, y); };
                const double pa = integrate(pdf, z, hi);
                const double ma = integrate([&](double y) { return y * pdf(y); }, z, hi);
                const double pb = integrate(pdf, lo, z);
                const double mb = integrate([&](double y) { return y * pdf(y); }, lo, z);
                const auto above = truncated_moments(kP, u, x, z, Side::Above);
                const auto below = truncated_moments(kP, u, x, z, Side::Below);
                EXPECT_NEAR(above.prob, pa, 1e-13);
                EXPECT_NEAR(above.partial_mean, ma, 1e-13);
                EXPECT_NEAR(below.prob, pb, 1e-13);
                EXPECT_NEAR(below.partial_mean, mb, 1e-13);
            }
}

TEST(TruncatedMoments, DegenerateLawAndInfiniteCuts) {
    const TransitionLaw point{0.2, 0.0};
    EXPECT_EQ(truncated_moments(point, 0.1, Side::Above).prob, 1.0);
    EXPECT_EQ(truncated_moments(point, 0.1, Side::Above).partial_mean, 0.2);
    EXPECT_EQ(truncated_moments(point, 0.3, Side::Above).prob, 0.0);
    const TransitionLaw law{0.0, 0.01};
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(truncated_moments(law, -inf, Side::Above).prob, 1.0);
    EXPECT_EQ(truncated_moments(law, inf, Side::Above).prob, 0.0);
    EXPECT_NEAR(truncated_moments(law, inf, Side::Below).partial_mean, 0.0, 1e-18);
}

TEST(Generator, ActsOnPolynomials) {
    const double x = 0.07;
    EXPECT_NEAR(apply_generator(kP, x, 1.0, 0.0), kP.mu() * (kP.theta() - x), 1e-15);
    auto sq = [](double y) { return y * y; };
    const double expect = 2 * x * kP.mu() * (kP.theta() - x) + kP.sigma() * kP.sigma();
    EXPECT_NEAR(apply_generator(kP, sq, x), expect, 1e-8);
}

TEST(Sampling, MatchesTransitionMoments) {
    Rng rng(derive_seed(7, 0));
    const auto law = step_law(kP, 0.03);
    const double x = -0.05;
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = sample_transition(law, x, rng);
        s += y;
        s2 += y * y;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    const double v = transition_var(kP, 0.03);
    EXPECT_NEAR(mean, transition_mean(kP, 0.03, x), 4.0 * std::sqrt(v / n));
    EXPECT_NEAR(var, v, 4.0 * v * std::sqrt(2.0 / n));
    EXPECT_EQ(sample_transition(kP, 0.0, 0.123, rng), 0.123);
}

TEST(Sampling, SeedsAreDeterministicAndDistinct) {
    EXPECT_EQ(derive_seed(42, 5), derive_seed(42, 5));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
    EXPECT_EQ(seen.size(), 10000u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}
