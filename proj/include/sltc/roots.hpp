#pragma once

// Scalar root bracketing and refinement used by the coupling zero-finder and
// the eigenvalue scan.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sltc/errors.hpp"

namespace sltc {

struct RootResult {
    double x = 0.0;         // refined abscissa
    double f = 0.0;         // function value there
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
};

// Brent-style refinement of a sign change on [lo, hi].  f(lo) and f(hi) must
// have opposite signs.  Stops when the bracket shrinks to floating-point
// resolution or |f| drops below f_tol.
inline RootResult brent_root(const std::function<double(double)>& f, double lo, double hi,
                             double f_tol = 0.0, int max_iter = 200) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, a, a, 0};
    if (fb == 0.0) return {b, 0.0, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw NumericalFailure("brent_root: endpoints do not bracket a sign change");

    double c = a, fc = fa;
    double d = b - a, e = d;
    int it = 0;
    for (; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double eps = std::numeric_limits<double>::epsilon();
        double tol1 = 2.0 * eps * std::abs(b) + 0.5 * eps;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= f_tol) break;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    double blo = std::min(b, c), bhi = std::max(b, c);
    return {b, fb, blo, bhi, it};
}

// Golden-section minimization of |f| on [lo, hi]; used only to localize
// suspected tangential (double) roots, so modest accuracy suffices.
inline RootResult golden_min_abs(const std::function<double(double)>& f, double lo, double hi,
                                 int max_iter = 80) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
    int it = 0;
    for (; it < max_iter && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = std::abs(f(x1));
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = std::abs(f(x2));
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm), a, b, it};
}

}  // namespace sltc
