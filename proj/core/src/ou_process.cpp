#include "ouspread/ou_process.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ouspread {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_elapsed(double u) {
    if (!(u >= 0.0) || !std::isfinite(u))
        throw std::invalid_argument("elapsed time must be finite and >= 0, got " + std::to_string(u));
}

}  // namespace

OUParams::OUParams(double mu, double theta, double sigma, double r, double T)
    : mu_(mu), theta_(theta), sigma_(sigma), r_(r), T_(T) {
    require(std::isfinite(mu) && mu > 0.0, "mu must be finite and > 0");
    require(std::isfinite(theta), "theta must be finite");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be finite and > 0");
    require(std::isfinite(r) && r > 0.0, "r must be finite and > 0");
    require(std::isfinite(T) && T > 0.0, "T must be finite and > 0");
    require(std::isfinite(x_star()), "mu theta / (mu + r) is not finite");
}

OUParams OUParams::reference() { return {16.0, 0.0, 0.16, 0.01, 1.0}; }

double OUParams::stationary_sd() const { return std::sqrt(stationary_var()); }

double TransitionLaw::sd() const { return std::sqrt(variance); }

double transition_mean(const OUParams& p, double u, double x) {
    require_elapsed(u);
    require(std::isfinite(x), "spread must be finite");
    const double decay = std::exp(-p.mu() * u);
    return x * decay + p.theta() * (1.0 - decay);
}

double transition_var(const OUParams& p, double u) {
    require_elapsed(u);
    // expm1 keeps full relative precision for small u
    return -p.stationary_var() * std::expm1(-2.0 * p.mu() * u);
}

TransitionLaw transition_law(const OUParams& p, double u, double x) {
    return {transition_mean(p, u, x), transition_var(p, u)};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double transition_pdf(const OUParams& p, double u, double x, double y) {
    if (!(u > 0.0))
        throw std::invalid_argument("transition_pdf needs u > 0; u = 0 is a point mass");
    const TransitionLaw law = transition_law(p, u, x);
    const double sd = law.sd();
    return normal_pdf((y - law.mean) / sd) / sd;
}

TruncatedMoments truncated_moments(const TransitionLaw& law, double z, Side side) {
    const double sd = law.sd();
    if (sd == 0.0) {
        const bool in = side == Side::Above ? law.mean >= z : law.mean <= z;
        return in ? TruncatedMoments{1.0, law.mean} : TruncatedMoments{0.0, 0.0};
    }
    if (std::isinf(z)) {
        const bool full = (side == Side::Above) == (z < 0.0);
        return full ? TruncatedMoments{1.0, law.mean} : TruncatedMoments{0.0, 0.0};
    }
    const double d = (z - law.mean) / sd;
    const double dens = sd * normal_pdf(d);
    if (side == Side::Above) {
        const double prob = normal_sf(d);
        return {prob, law.mean * prob + dens};
    }
    const double prob = normal_cdf(d);
    return {prob, law.mean * prob - dens};
}

TruncatedMoments truncated_moments(const OUParams& p, double u, double x, double z, Side side) {
    if (!(u > 0.0)) throw std::invalid_argument("truncated_moments needs u > 0");
    return truncated_moments(transition_law(p, u, x), z, side);
}

double apply_generator(const OUParams& p, double x, double df, double d2f) {
    return p.mu() * (p.theta() - x) * df + 0.5 * p.sigma() * p.sigma() * d2f;
}

double apply_generator(const OUParams& p, const std::function<double(double)>& f, double x,
                       double step) {
    const double fp = f(x + step);
    const double f0 = f(x);
    const double fm = f(x - step);
    return apply_generator(p, x, (fp - fm) / (2.0 * step), (fp - 2.0 * f0 + fm) / (step * step));
}

StepLaw step_law(const OUParams& p, double u) {
    require_elapsed(u);
    const double decay = std::exp(-p.mu() * u);
    return {u, decay, std::sqrt(transition_var(p, u)), std::exp(-p.r() * u),
            p.theta() * (1.0 - decay)};
}

double sample_transition(const StepLaw& law, double x, Rng& rng) {
    if (law.u == 0.0) return x;
    std::normal_distribution<double> normal;
    return law.mean(x) + law.sd * normal(rng);
}

double sample_transition(const StepLaw& law, double x, std::normal_distribution<double>& normal,
                         Rng& rng) {
    if (law.u == 0.0) return x;
    return law.mean(x) + law.sd * normal(rng);
}

double sample_transition(const OUParams& p, double u, double x, Rng& rng) {
    return sample_transition(step_law(p, u), x, rng);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace ouspread
