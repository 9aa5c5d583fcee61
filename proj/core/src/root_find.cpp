#include "ouspread/root_find.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ouspread/errors.hpp"

namespace ouspread {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

RootResult finish(double x, double fx, int evals, const RootOptions& opts) {
    if (!(std::abs(fx) <= opts.tol * opts.scale)) {
        std::ostringstream msg;
        msg << "root search stalled at x = " << x << " with residual " << fx;
        throw Error(msg.str());
    }
    return {x, fx, evals};
}

}  // namespace

RootResult brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 const RootOptions& opts) {
    int evals = 0;
    if (fa == 0.0) return finish(a, fa, evals, opts);
    if (fb == 0.0) return finish(b, fb, evals, opts);
    if ((fa > 0.0) == (fb > 0.0)) throw RootNotBracketed("brent: f(a) and f(b) share a sign");

    double c = b, fc = fb, d = 0.0, e = 0.0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * std::numeric_limits<double>::min();
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return finish(b, fb, evals, opts);

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation, secant when only two points are distinct
            double pp, q;
            const double s = fb / fa;
            if (a == c) {
                pp = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                pp = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pp > 0.0) q = -q;
            pp = std::abs(pp);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * pp < std::min(min1, min2)) {
                e = d;
                d = pp / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = f(b);
        ++evals;
    }
    return finish(b, fb, evals, opts);
}

RootResult root_find(const std::function<double(double)>& f, double seed,
                     const RootOptions& opts) {
    seed = std::clamp(seed, opts.lower, opts.upper);
    const double f0 = f(seed);
    int evals = 1;
    if (f0 == 0.0) return {seed, f0, evals};

    double lo = seed, flo = f0;
    double hi = seed, fhi = f0;
    double step = opts.initial_step;
    for (int i = 0; i < opts.max_expansions; ++i, step *= 2.0) {
        if (hi < opts.upper) {
            const double x = std::min(seed + step, opts.upper);
            const double fx = f(x);
            ++evals;
            if ((fx > 0.0) != (fhi > 0.0) || fx == 0.0) {
                auto res = brent(f, hi, x, fhi, fx, opts);
                res.evaluations += evals;
                return res;
            }
            hi = x;
            fhi = fx;
        }
        if (lo > opts.lower) {
            const double x = std::max(seed - step, opts.lower);
            const double fx = f(x);
            ++evals;
            if ((fx > 0.0) != (flo > 0.0) || fx == 0.0) {
                auto res = brent(f, x, lo, fx, flo, opts);
                res.evaluations += evals;
                return res;
            }
            lo = x;
            flo = fx;
        }
        if (lo <= opts.lower && hi >= opts.upper) break;
    }
    std::ostringstream msg;
    msg << "no sign change found around seed " << seed << " within [" << lo << ", " << hi << "]";
    throw RootNotBracketed(msg.str());
}

}  // namespace ouspread
