#pragma once

// Interface connection at 0.  Writing the jump conditions
//
//   y(0+) mu = y'(0+) - y'(0-),    y'(0-) nu = y(0+) - y(0-)
//
// as a linear map of the trace pair (y, y') gives the transfer matrix
//
//         [ 1        nu      ]
//   T  =  [ mu   1 + mu nu   ],        det T = 1,
//
// so a solution on one side extends uniquely to the other whenever lambda is
// off the coupling poles.  The characteristic function is the Wronskian of the
// two extended shooting solutions,
//
//   psi = u v' - u' v,
//
// constant on each side and equal across 0; its zeros off the poles are the
// eigenvalues.  At a coupling pole the jump conditions degenerate into
// one-sided trace conditions instead, and eigenvalue membership is decided by
// the pair of pole characteristics below (both vanishing is the only way to
// reach geometric multiplicity two).

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "sltc/problem.hpp"
#include "sltc/shooting.hpp"

namespace sltc {

struct TransferMatrix {
    Complex t00{1.0}, t01{0.0}, t10{0.0}, t11{1.0};

    Complex det() const { return t00 * t11 - t01 * t10; }

    // trace pair at 0-  ->  trace pair at 0+
    EndpointState apply(const EndpointState& s) const {
        return {0.0, t00 * s.value + t01 * s.derivative, t10 * s.value + t11 * s.derivative};
    }
    // trace pair at 0+  ->  trace pair at 0-, via the unit-determinant adjugate
    EndpointState apply_inverse(const EndpointState& s) const {
        return {0.0, t11 * s.value - t01 * s.derivative, -t10 * s.value + t00 * s.derivative};
    }
};

inline TransferMatrix transfer_matrix(const ProblemSpec& prob, Complex lambda) {
    Complex m = prob.mu.eval(lambda);
    Complex n = prob.nu.eval(lambda);
    return {1.0, n, m, 1.0 + m * n};
}

inline EndpointState extend_u(const ProblemSpec& prob, Complex lambda, const EndpointState& at0m) {
    return transfer_matrix(prob, lambda).apply(at0m);
}

inline EndpointState extend_v(const ProblemSpec& prob, Complex lambda, const EndpointState& at0p) {
    return transfer_matrix(prob, lambda).apply_inverse(at0p);
}

// Shooting traces of u and v on both sides of 0 plus the Wronskian evaluated
// on each side (equal up to roundoff; both are kept so callers can check).
struct InterfaceStates {
    EndpointState u_minus, u_plus;
    EndpointState v_minus, v_plus;
    Complex psi_minus{0.0}, psi_plus{0.0};

    Complex psi() const { return psi_minus; }
    double scale() const {
        double su = std::abs(u_minus.value) + std::abs(u_minus.derivative);
        double sv = std::abs(v_plus.value) + std::abs(v_plus.derivative);
        return std::max(1.0, su) * std::max(1.0, sv);
    }
};

inline InterfaceStates interface_states(const ProblemSpec& prob, Complex lambda,
                                        const IvpOptions& opt = {}) {
    InterfaceStates st;
    st.u_minus = integrate_left(prob, lambda, 0, opt).end;
    st.v_plus = integrate_right(prob, lambda, 0, opt).end;
    TransferMatrix T = transfer_matrix(prob, lambda);
    st.u_plus = T.apply(st.u_minus);
    st.v_minus = T.apply_inverse(st.v_plus);
    st.psi_minus = st.u_minus.value * st.v_minus.derivative - st.u_minus.derivative * st.v_minus.value;
    st.psi_plus = st.u_plus.value * st.v_plus.derivative - st.u_plus.derivative * st.v_plus.value;
    return st;
}

inline Complex wronskian(const ProblemSpec& prob, Complex lambda, const IvpOptions& opt = {}) {
    return interface_states(prob, lambda, opt).psi();
}

// ── behaviour at coupling poles ──────────────────────────────────────────────

enum class PoleCase { PoleOfMu, PoleOfNu, PoleOfBoth };

inline const char* to_string(PoleCase c) {
    switch (c) {
        case PoleCase::PoleOfMu: return "pole_mu";
        case PoleCase::PoleOfNu: return "pole_nu";
        case PoleCase::PoleOfBoth: return "pole_both";
    }
    return "?";
}

// Eigenvalue test at a coupling pole.  Each side contributes one scalar
// characteristic; lambda0 is an eigenvalue iff at least one vanishes, with
// geometric multiplicity two exactly when both do.
struct PoleClassification {
    double lambda0 = 0.0;
    PoleCase kind = PoleCase::PoleOfMu;
    Complex left_characteristic{0.0}, right_characteristic{0.0};
    double left_scale = 1.0, right_scale = 1.0;
    bool left_vanishes = false, right_vanishes = false;
    bool is_eigenvalue = false;
    int multiplicity = 0;
    // distinct mu/nu poles both inside the proximity band of lambda0: the case
    // label is the nearest pole's and should be read with suspicion
    bool ambiguous = false;
};

inline constexpr double kPoleCharacteristicTol = 1e-7;

inline PoleClassification classify_pole(const ProblemSpec& prob, double lambda0,
                                        const IvpOptions& opt = {}) {
    auto im = prob.mu.pole_near(Complex(lambda0));
    auto in = prob.nu.pole_near(Complex(lambda0));
    if (!im && !in)
        throw NotAPole("classify_pole: " + std::to_string(lambda0) +
                       " is not within the proximity band of any coupling pole");

    PoleClassification out;
    out.lambda0 = lambda0;
    if (im && in) {
        double pm = prob.mu.poles()[*im], pn = prob.nu.poles()[*in];
        if (std::abs(pm - pn) <= pole_proximity_tol(pm)) {
            out.kind = PoleCase::PoleOfBoth;
        } else {
            out.kind = (std::abs(lambda0 - pm) <= std::abs(lambda0 - pn)) ? PoleCase::PoleOfMu
                                                                          : PoleCase::PoleOfNu;
            out.ambiguous = true;
        }
    } else {
        out.kind = im ? PoleCase::PoleOfMu : PoleCase::PoleOfNu;
    }

    EndpointState u = integrate_left(prob, lambda0, 0, opt).end;
    EndpointState v = integrate_right(prob, lambda0, 0, opt).end;
    const double su = std::abs(u.value) + std::abs(u.derivative);
    const double sv = std::abs(v.value) + std::abs(v.derivative);

    switch (out.kind) {
        case PoleCase::PoleOfMu: {
            // trace conditions decouple into  y(0-) + nu y'(0-) = 0  and  y(0+) = 0
            Complex nv = out.ambiguous ? prob.nu.eval_unguarded(Complex(lambda0))
                                       : prob.nu.eval(Complex(lambda0));
            out.left_characteristic = u.value + nv * u.derivative;
            out.left_scale = std::max(1.0, std::abs(u.value) + std::abs(nv) * std::abs(u.derivative));
            out.right_characteristic = v.value;
            out.right_scale = std::max(1.0, sv);
            break;
        }
        case PoleCase::PoleOfNu: {
            // trace conditions decouple into  y'(0-) = 0  and  y'(0+) = mu y(0+)
            Complex mv = out.ambiguous ? prob.mu.eval_unguarded(Complex(lambda0))
                                       : prob.mu.eval(Complex(lambda0));
            out.left_characteristic = u.derivative;
            out.left_scale = std::max(1.0, su);
            out.right_characteristic = v.derivative - mv * v.value;
            out.right_scale = std::max(1.0, std::abs(v.derivative) + std::abs(mv) * std::abs(v.value));
            break;
        }
        case PoleCase::PoleOfBoth: {
            // trace conditions decouple into  y'(0-) = 0  and  y(0+) = 0
            out.left_characteristic = u.derivative;
            out.left_scale = std::max(1.0, su);
            out.right_characteristic = v.value;
            out.right_scale = std::max(1.0, sv);
            break;
        }
    }
    out.left_vanishes = std::abs(out.left_characteristic) < kPoleCharacteristicTol * out.left_scale;
    out.right_vanishes =
        std::abs(out.right_characteristic) < kPoleCharacteristicTol * out.right_scale;
    out.is_eigenvalue = out.left_vanishes || out.right_vanishes;
    out.multiplicity = (out.left_vanishes ? 1 : 0) + (out.right_vanishes ? 1 : 0);
    return out;
}

}  // namespace sltc
