#pragma once

// Shared fixtures: the shipped interface configurations rebuilt in memory,
// plus a few sampling helpers the suites have in common.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "sltc/sltc.hpp"

namespace sltc::testcfg {

// Classical Dirichlet problem on [-pi, pi]: both couplings identically zero,
// eigenvalues n^2/4.
inline ProblemSpec continuous() {
    ProblemSpec p;
    return p;
}

// mu = 1/(lambda - 1), nu = (lambda - 1)/lambda.  The mu pole at 1 is a double
// eigenvalue; the nu pole at 0 is not an eigenvalue.
inline ProblemSpec double_eigenvalue() {
    ProblemSpec p;
    p.mu = RationalCoupling::mu(0.0, 0.0, {1.0}, {1.0});
    p.nu = RationalCoupling::nu(0.0, 1.0, {0.0}, {1.0});
    return p;
}

// mu = (lambda - 1)/(lambda - 9/4), nu = 1/mu; every eigenvalue is simple.
inline ProblemSpec no_double_slice() {
    ProblemSpec p;
    p.mu = RationalCoupling::mu(0.0, 1.0, {2.25}, {1.25});
    p.nu = RationalCoupling::nu(0.0, 1.0, {1.0}, {1.25});
    return p;
}

// Both couplings carry a positive eigenparameter slope, so both interface
// blocks run through the reciprocal expansions:
//   mu = -lambda + 1/(lambda - 2),  zeros 1 -+ sqrt(2)
//   nu =  lambda - 1/lambda,        zeros -+ 1
inline ProblemSpec herglotz_full() {
    ProblemSpec p;
    p.mu = RationalCoupling::mu(1.0, 0.0, {2.0}, {1.0});
    p.nu = RationalCoupling::nu(1.0, 0.0, {0.0}, {1.0});
    return p;
}

// mu = 1/(lambda - 1/2) has its pole exactly where nu = lambda + 3/2 - 1/lambda
// vanishes; lambda = 1/2 is not an eigenvalue and the resolvent there takes
// the fully rescaled form on both rows.
inline ProblemSpec closing_example() {
    ProblemSpec p;
    p.mu = RationalCoupling::mu(0.0, 0.0, {0.5}, {1.0});
    p.nu = RationalCoupling::nu(1.0, 1.5, {0.0}, {1.0});
    return p;
}

// Square barrier on [-1, 1], Robin ends, mixed coupling types.
inline ProblemSpec sampled_well() {
    ProblemSpec p;
    p.alpha = M_PI / 4.0;
    p.beta = M_PI / 2.0;
    p.q = Potential::piecewise_constant({-1.0, 1.0}, {0.0, 2.0, 0.0});
    p.mu = RationalCoupling::mu(0.0, 1.0, {4.0}, {2.0});
    p.nu = RationalCoupling::nu(1.0, 0.0, {2.5}, {1.5});
    return p;
}

inline std::vector<ProblemSpec> all_configurations() {
    return {continuous(),      double_eigenvalue(), no_double_slice(),
            herglotz_full(),   closing_example(),   sampled_well()};
}

// Random truncated trigonometric sum; smooth on the whole line.
inline std::function<Complex(double)> random_trig(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Complex> c(5), s(5);
    for (int k = 0; k < 5; ++k) {
        c[k] = Complex(U(rng), U(rng));
        s[k] = Complex(U(rng), U(rng));
    }
    return [c, s](double x) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k < 5; ++k) {
            acc += c[k] * std::cos((k + 1) * x);
            acc += s[k] * std::sin((k + 1) * x);
        }
        return acc;
    };
}

inline std::vector<Complex> random_block(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex(U(rng), U(rng));
    return v;
}

// Honest residual of (lambda - ell) f = h on a grid function: the stored
// (-f'' + q f) arrays are dropped so the differential part is rebuilt by
// finite differences of the value arrays.
inline double operator_residual(const ProblemSpec& prob, Complex lambda, const GridFunction& f,
                                const std::function<Complex(double)>& h) {
    std::vector<Complex> none;
    std::vector<Complex> ll = detail::apply_ell_side(prob.q, f.mesh.left, f.left, none);
    std::vector<Complex> lr = detail::apply_ell_side(prob.q, f.mesh.right, f.right, none);
    std::vector<Complex> dl(ll.size()), dr(lr.size());
    for (std::size_t k = 0; k < ll.size(); ++k)
        dl[k] = lambda * f.left[k] - ll[k] - h(f.mesh.left.node(k));
    for (std::size_t k = 0; k < lr.size(); ++k)
        dr[k] = lambda * f.right[k] - lr[k] - h(f.mesh.right.node(k));
    Complex nrm2 = simpson_total(
        [&] {
            std::vector<Complex> p(dl.size());
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = dl[k] * std::conj(dl[k]);
            return p;
        }(),
        f.mesh.left.step());
    nrm2 += simpson_total(
        [&] {
            std::vector<Complex> p(dr.size());
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = dr[k] * std::conj(dr[k]);
            return p;
        }(),
        f.mesh.right.step());
    return std::sqrt(std::abs(nrm2));
}

}  // namespace sltc::testcfg
