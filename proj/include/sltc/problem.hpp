#pragma once

// Problem data: the two-segment interval [-a, 0) u (0, b], separated boundary
// conditions written through angles,
//
//   y(-a) cos(alpha) = y'(-a) sin(alpha),   alpha in [0, pi)
//   y(b)  cos(beta)  = y'(b)  sin(beta),    beta  in (0, pi]
//
// a potential q, and the two rational couplings tying the one-sided traces at
// zero together:
//
//   y(0+) mu(L) = y'(0+) - y'(0-)
//   y'(0-) nu(L) = y(0+) - y(0-)

#include <cmath>
#include <stdexcept>
#include <string>

#include "sltc/potential.hpp"
#include "sltc/rational_coupling.hpp"

namespace sltc {

struct ProblemSpec {
    double a = M_PI;  // left segment is [-a, 0)
    double b = M_PI;  // right segment is (0, b]
    double alpha = 0.0;
    double beta = M_PI;
    Potential q;
    RationalCoupling mu = RationalCoupling::mu(0.0, 0.0);
    RationalCoupling nu = RationalCoupling::nu(0.0, 0.0);

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("geometry.a: must be > 0");
        if (!(b > 0.0)) throw std::invalid_argument("geometry.b: must be > 0");
        if (!(alpha >= 0.0 && alpha < M_PI))
            throw std::invalid_argument("boundary.alpha: must lie in [0, pi)");
        if (!(beta > 0.0 && beta <= M_PI))
            throw std::invalid_argument("boundary.beta: must lie in (0, pi]");
        if (mu.kind() != CouplingKind::Mu)
            throw std::invalid_argument("mu coupling has the wrong monotonicity kind");
        if (nu.kind() != CouplingKind::Nu)
            throw std::invalid_argument("nu coupling has the wrong monotonicity kind");
    }

    bool near_any_coupling_pole(Complex lambda) const {
        return mu.is_pole(lambda) || nu.is_pole(lambda);
    }
};

}  // namespace sltc
