#pragma once

// Adaptive Dormand-Prince 5(4) integration of the complex second-order system
//
//   y'' = (q(x) - lambda) y
//
// written in first-order form over (y, y').  Steps always land exactly on the
// potential's breakpoints and on every requested output abscissa, so recorded
// states carry no interpolation error and discontinuities of q never sit
// inside a step.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sltc/errors.hpp"
#include "sltc/potential.hpp"

namespace sltc {

struct OdeState {
    std::complex<double> y{0.0, 0.0};
    std::complex<double> yp{0.0, 0.0};
};

struct IvpOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_steps = 4'000'000;
};

namespace detail {

struct Dopri5 {
    const Potential& q;
    std::complex<double> lambda;

    OdeState rhs(double x, const OdeState& s) const {
        return {s.yp, (q(x) - lambda) * s.y};
    }

    static OdeState axpy(const OdeState& s, double h, const OdeState* k, const double* w, int n) {
        std::complex<double> y = s.y, yp = s.yp;
        for (int i = 0; i < n; ++i) {
            y += h * w[i] * k[i].y;
            yp += h * w[i] * k[i].yp;
        }
        return {y, yp};
    }

    // One adaptive sweep from x0 to x1 (either direction); throws on step
    // underflow or budget exhaustion.
    OdeState sweep(double x0, double x1, OdeState s, const IvpOptions& opt,
                   std::size_t& steps_left) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a2[] = {1.0 / 5};
        static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
        static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
        static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                        -212.0 / 729};
        static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                        -5103.0 / 18656};
        static constexpr double b5[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                        -2187.0 / 6784, 11.0 / 84};
        static constexpr double er[] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                        -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

        if (x1 == x0) return s;
        const double dir = (x1 > x0) ? 1.0 : -1.0;
        const double span = std::abs(x1 - x0);
        double x = x0;
        double h = dir * span / 20.0;
        OdeState k[7];
        k[0] = rhs(x, s);  // FSAL seed
        bool have_k0 = true;

        while (dir * (x1 - x) > 0.0) {
            if (steps_left-- == 0) throw IntegratorFailure("step budget exhausted");
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)))
                throw IntegratorFailure("step size underflow");
            if (dir * (x + h - x1) > 0.0) h = x1 - x;

            if (!have_k0) k[0] = rhs(x, s);
            k[1] = rhs(x + c2 * h, axpy(s, h, k, a2, 1));
            k[2] = rhs(x + c3 * h, axpy(s, h, k, a3, 2));
            k[3] = rhs(x + c4 * h, axpy(s, h, k, a4, 3));
            k[4] = rhs(x + c5 * h, axpy(s, h, k, a5, 4));
            k[5] = rhs(x + h, axpy(s, h, k, a6, 5));
            OdeState s5 = axpy(s, h, k, b5, 6);
            k[6] = rhs(x + h, s5);

            std::complex<double> ey = 0.0, eyp = 0.0;
            for (int i = 0; i < 7; ++i) {
                ey += er[i] * k[i].y;
                eyp += er[i] * k[i].yp;
            }
            ey *= h;
            eyp *= h;
            double sc_y = opt.abs_tol + opt.rel_tol * std::max(std::abs(s.y), std::abs(s5.y));
            double sc_p = opt.abs_tol + opt.rel_tol * std::max(std::abs(s.yp), std::abs(s5.yp));
            double err = std::sqrt(0.5 * (std::norm(ey / sc_y) + std::norm(eyp / sc_p)));

            if (err <= 1.0) {
                x += h;
                s = s5;
                k[0] = k[6];  // FSAL
                have_k0 = true;
            } else {
                have_k0 = true;  // k[0] still valid at unchanged x
            }
            double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        }
        return s;
    }
};

}  // namespace detail

// Integrates from x0 to x1 (either direction) with initial state s.  `record`
// lists abscissae sorted in the direction of travel (endpoints allowed); the
// state at each is appended to *out when out is non-null.  Returns the state
// at x1.
inline OdeState integrate_schrodinger(const Potential& q, std::complex<double> lambda, double x0,
                                      double x1, OdeState s, const std::vector<double>& record = {},
                                      std::vector<OdeState>* out = nullptr,
                                      const IvpOptions& opt = {}) {
    detail::Dopri5 stepper{q, lambda};
    const double dir = (x1 >= x0) ? 1.0 : -1.0;

    std::vector<double> stops;
    for (double r : record) stops.push_back(r);
    double lo = std::min(x0, x1), hi = std::max(x0, x1);
    for (double bp : q.interior_breakpoints(lo, hi)) stops.push_back(bp);
    std::sort(stops.begin(), stops.end());
    if (dir < 0.0) std::reverse(stops.begin(), stops.end());

    std::size_t steps_left = opt.max_steps;
    std::size_t ri = 0;  // next record index
    double x = x0;
    for (double stop : stops) {
        if (dir * (stop - x0) < 0.0 || dir * (x1 - stop) < 0.0) continue;  // outside sweep
        if (stop != x) s = stepper.sweep(x, stop, s, opt, steps_left);
        x = stop;
        while (ri < record.size() && record[ri] == stop) {
            if (out) out->push_back(s);
            ++ri;
        }
    }
    if (x != x1) s = stepper.sweep(x, x1, s, opt, steps_left);
    while (ri < record.size() && record[ri] == x1) {
        if (out) out->push_back(s);
        ++ri;
    }
    if (ri != record.size())
        throw IntegratorFailure("record abscissae outside the integration range");
    return s;
}

}  // namespace sltc
