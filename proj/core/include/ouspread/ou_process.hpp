#pragma once

/**
 * @file ou_process.hpp
 * @brief Transition law of the Ornstein-Uhlenbeck spread
 *
 *   dX_t = mu (theta - X_t) dt + sigma dB_t
 *
 * Over an elapsed time u the spread is Gaussian with
 *   mean     m(u, x) = x e^{-mu u} + theta (1 - e^{-mu u})
 *   variance v(u)    = sigma^2 / (2 mu) (1 - e^{-2 mu u})
 * which is all the kernels, the lattice and the simulator need.
 */

#include <cstdint>
#include <functional>
#include <random>

namespace ouspread {

/// Model and market parameters. Validated on construction, immutable afterwards.
class OUParams {
public:
    /// @param mu     mean-reversion speed (> 0)
    /// @param theta  long-run mean
    /// @param sigma  volatility (> 0)
    /// @param r      discount rate (> 0)
    /// @param T      horizon (> 0)
    OUParams(double mu, double theta, double sigma, double r, double T);

    /// T = 1, r = 0.01, theta = 0, mu = 16, sigma = 0.16.
    static OUParams reference();

    double mu() const noexcept { return mu_; }
    double theta() const noexcept { return theta_; }
    double sigma() const noexcept { return sigma_; }
    double r() const noexcept { return r_; }
    double T() const noexcept { return T_; }

    /// Root of the exit drift, mu theta / (mu + r).
    double x_star() const noexcept { return mu_ * theta_ / (mu_ + r_); }

    /// sigma^2 / (2 mu), the variance cap.
    double stationary_var() const noexcept { return sigma_ * sigma_ / (2.0 * mu_); }
    double stationary_sd() const;

    OUParams with_theta(double theta) const { return {mu_, theta, sigma_, r_, T_}; }
    OUParams with_horizon(double T) const { return {mu_, theta_, sigma_, r_, T}; }

private:
    double mu_;
    double theta_;
    double sigma_;
    double r_;
    double T_;
};

struct TransitionLaw {
    double mean;
    double variance;

    double sd() const;
};

enum class Side { Above, Below };

/// P(X >= z) or P(X <= z), together with E[X I(.)].
struct TruncatedMoments {
    double prob;
    double partial_mean;
};

double transition_mean(const OUParams& p, double u, double x);
double transition_var(const OUParams& p, double u);
TransitionLaw transition_law(const OUParams& p, double u, double x);

/// Density of X_u at y given X_0 = x. Requires u > 0.
double transition_pdf(const OUParams& p, double u, double x, double y);

double normal_cdf(double z);
/// 1 - Phi(z), evaluated without cancellation in the upper tail.
double normal_sf(double z);
double normal_pdf(double z);

TruncatedMoments truncated_moments(const TransitionLaw& law, double z, Side side);
TruncatedMoments truncated_moments(const OUParams& p, double u, double x, double z, Side side);

/// mu (theta - x) f'(x) + sigma^2 / 2 f''(x).
double apply_generator(const OUParams& p, double x, double df, double d2f);

/// Generator applied to a callable, derivatives by central differences of width step.
double apply_generator(const OUParams& p, const std::function<double(double)>& f, double x,
                       double step = 1e-4);

/// Everything that depends only on the elapsed time u, cached for the O(N^2) sums.
struct StepLaw {
    double u;
    double decay;     ///< e^{-mu u}
    double sd;        ///< sqrt(v(u))
    double discount;  ///< e^{-r u}
    double drift;     ///< theta (1 - e^{-mu u})

    double mean(double x) const noexcept { return x * decay + drift; }
    TransitionLaw law(double x) const noexcept { return {mean(x), sd * sd}; }
};

StepLaw step_law(const OUParams& p, double u);

using Rng = std::mt19937_64;

/// Exact draw of X_u given X_0 = x.
double sample_transition(const OUParams& p, double u, double x, Rng& rng);
double sample_transition(const StepLaw& law, double x, Rng& rng);
/// Reuses `normal`, which keeps the spare variate of each generated pair.
double sample_transition(const StepLaw& law, double x, std::normal_distribution<double>& normal,
                         Rng& rng);

/// Seed for stream `index` derived from `master` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace ouspread
