#pragma once

// Green's kernels for (lambda - L) on the function part.
//
// Off the coupling poles the kernel is the classical two-solution form
//
//   G(x, t) = u(min) v(max) / psi(lambda),
//
// with u, v the extended shooting solutions.  Applying it to data h uses the
// integral representation
//
//   g(x) psi = u(x) * int_x^b v h  +  v(x) * int_{-a}^x u h,
//   g'(x) psi = u'(x) * int_x^b v h  +  v'(x) * int_{-a}^x u h,
//
// whose one-sided traces at 0 come out algebraically (no differencing).  At a
// coupling pole the transmission conditions decouple the halves: each side
// gets its own kernel built from the shooting solution and a partner solution
// w launched at 0 with the pole's trace condition,
//
//   pole of mu:  w-(0-) = nu(L0), w-'(0-) = -1     and   w+(0+) = 0, w+'(0+) = 1
//   pole of nu:  w-(0-) = 1,      w-'(0-) = 0      and   w+(0+) = 1, w+'(0+) = mu(L0)
//   pole of both: the first column of each line above,
//
// and the cross blocks vanish identically.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "sltc/block_vector.hpp"
#include "sltc/grid.hpp"
#include "sltc/problem.hpp"
#include "sltc/shooting.hpp"
#include "sltc/transmission.hpp"

namespace sltc {

struct GreensOptions {
    std::size_t mesh_intervals_per_side = 4096;
    double eigenvalue_tol = 1e-8;
    IvpOptions ivp;
};

class GreensKernel {
public:
    GreensKernel(const ProblemSpec& prob, Complex lambda, const GreensOptions& opt = {})
        : prob_(prob), lambda_(lambda), opt_(opt), mesh_(make_mesh(prob, opt.mesh_intervals_per_side)) {
        at_pole_ = prob.near_any_coupling_pole(lambda);
        if (at_pole_) build_pole(); else build_regular();
    }

    bool at_pole() const { return at_pole_; }
    const MeshPair& mesh() const { return mesh_; }
    Complex lambda() const { return lambda_; }
    const PoleClassification& pole_classification() const { return pc_; }
    Complex psi() const { return psi_minus_; }

    // shooting solutions on their home sides (used by the resolvent assembly)
    const std::vector<Complex>& u_left() const { return ul_; }
    const std::vector<Complex>& u_left_deriv() const { return dul_; }
    const std::vector<Complex>& v_right() const { return vr_; }
    const std::vector<Complex>& v_right_deriv() const { return dvr_; }
    const EndpointState& u_at_0m() const { return u0m_; }
    const EndpointState& v_at_0p() const { return v0p_; }

    GridFunction apply(const std::vector<Complex>& h_left, const std::vector<Complex>& h_right) const {
        if (h_left.size() != mesh_.left.nodes() || h_right.size() != mesh_.right.nodes())
            throw std::invalid_argument("GreensKernel::apply: data not on the kernel mesh");
        return at_pole_ ? apply_pole(h_left, h_right) : apply_regular(h_left, h_right);
    }

    GridFunction apply(const std::function<Complex(double)>& h) const {
        std::vector<Complex> hl(mesh_.left.nodes()), hr(mesh_.right.nodes());
        for (std::size_t k = 0; k < hl.size(); ++k) hl[k] = h(mesh_.left.node(k));
        for (std::size_t k = 0; k < hr.size(); ++k) hr[k] = h(mesh_.right.node(k));
        return apply(hl, hr);
    }

private:
    void build_regular() {
        ShotResult su = integrate_left(prob_, lambda_, mesh_.left.intervals, opt_.ivp);
        ShotResult sv = integrate_right(prob_, lambda_, mesh_.right.intervals, opt_.ivp);
        ul_ = su.trajectory.y;  dul_ = su.trajectory.yp;
        vr_ = sv.trajectory.y;  dvr_ = sv.trajectory.yp;
        u0m_ = su.end;
        v0p_ = sv.end;
        TransferMatrix T = transfer_matrix(prob_, lambda_);
        u0p_ = T.apply(u0m_);
        v0m_ = T.apply_inverse(v0p_);

        std::vector<double> rnodes = mesh_.right.node_list();
        std::vector<OdeState> states;
        integrate_schrodinger(prob_.q, lambda_, 0.0, prob_.b, {u0p_.value, u0p_.derivative},
                              rnodes, &states, opt_.ivp);
        for (const OdeState& s : states) { ur_.push_back(s.y); dur_.push_back(s.yp); }

        std::vector<double> lnodes = mesh_.left.node_list();
        std::vector<double> desc(lnodes.rbegin(), lnodes.rend());
        states.clear();
        integrate_schrodinger(prob_.q, lambda_, 0.0, -prob_.a, {v0m_.value, v0m_.derivative},
                              desc, &states, opt_.ivp);
        vl_.assign(states.size(), Complex{});
        dvl_.assign(states.size(), Complex{});
        for (std::size_t k = 0; k < states.size(); ++k) {
            vl_[states.size() - 1 - k] = states[k].y;
            dvl_[states.size() - 1 - k] = states[k].yp;
        }

        psi_minus_ = u0m_.value * v0m_.derivative - u0m_.derivative * v0m_.value;
        psi_plus_ = u0p_.value * v0p_.derivative - u0p_.derivative * v0p_.value;
        double su_sc = std::max(1.0, std::abs(u0m_.value) + std::abs(u0m_.derivative));
        double sv_sc = std::max(1.0, std::abs(v0p_.value) + std::abs(v0p_.derivative));
        if (std::abs(psi_minus_) < opt_.eigenvalue_tol * su_sc * sv_sc)
            throw EigenvalueLambda("kernel does not exist: characteristic function vanishes at this lambda");
    }

    void build_pole() {
        // snap to the nearest coupling pole; the kernel is the one at the pole itself
        double l0 = 0.0, best = 1e300;
        for (double p : prob_.mu.poles())
            if (std::abs(lambda_ - p) < best) { best = std::abs(lambda_ - p); l0 = p; }
        for (double p : prob_.nu.poles())
            if (std::abs(lambda_ - p) < best) { best = std::abs(lambda_ - p); l0 = p; }
        pc_ = classify_pole(prob_, l0, opt_.ivp);

        OdeState wm, wp;
        switch (pc_.kind) {
            case PoleCase::PoleOfMu: {
                Complex nv = pc_.ambiguous ? prob_.nu.eval_unguarded(Complex(l0))
                                           : prob_.nu.eval(Complex(l0));
                wm = {nv, -1.0};
                wp = {0.0, 1.0};
                break;
            }
            case PoleCase::PoleOfNu: {
                Complex mv = pc_.ambiguous ? prob_.mu.eval_unguarded(Complex(l0))
                                           : prob_.mu.eval(Complex(l0));
                wm = {1.0, 0.0};
                wp = {1.0, mv};
                break;
            }
            case PoleCase::PoleOfBoth:
                wm = {1.0, 0.0};
                wp = {0.0, 1.0};
                break;
        }

        Complex l0c(l0);
        ShotResult su = integrate_left(prob_, l0c, mesh_.left.intervals, opt_.ivp);
        ShotResult sv = integrate_right(prob_, l0c, mesh_.right.intervals, opt_.ivp);
        ul_ = su.trajectory.y;  dul_ = su.trajectory.yp;
        vr_ = sv.trajectory.y;  dvr_ = sv.trajectory.yp;
        u0m_ = su.end;
        v0p_ = sv.end;

        std::vector<double> lnodes = mesh_.left.node_list();
        std::vector<double> desc(lnodes.rbegin(), lnodes.rend());
        std::vector<OdeState> states;
        integrate_schrodinger(prob_.q, l0c, 0.0, -prob_.a, wm, desc, &states, opt_.ivp);
        wl_.assign(states.size(), Complex{});
        dwl_.assign(states.size(), Complex{});
        for (std::size_t k = 0; k < states.size(); ++k) {
            wl_[states.size() - 1 - k] = states[k].y;
            dwl_[states.size() - 1 - k] = states[k].yp;
        }
        states.clear();
        integrate_schrodinger(prob_.q, l0c, 0.0, prob_.b, wp, mesh_.right.node_list(), &states,
                              opt_.ivp);
        for (const OdeState& s : states) { wr_.push_back(s.y); dwr_.push_back(s.yp); }

        W_minus_ = u0m_.value * wm.yp - u0m_.derivative * wm.y;
        W_plus_ = wp.y * v0p_.derivative - wp.yp * v0p_.value;
        double sl = std::max(1.0, std::abs(u0m_.value) + std::abs(u0m_.derivative)) *
                    std::max(1.0, std::abs(wm.y) + std::abs(wm.yp));
        double sr = std::max(1.0, std::abs(v0p_.value) + std::abs(v0p_.derivative)) *
                    std::max(1.0, std::abs(wp.y) + std::abs(wp.yp));
        if (std::abs(W_minus_) < opt_.eigenvalue_tol * sl ||
            std::abs(W_plus_) < opt_.eigenvalue_tol * sr)
            throw EigenvalueLambda("kernel does not exist: the coupling pole is an eigenvalue");
    }

    GridFunction apply_regular(const std::vector<Complex>& hl, const std::vector<Complex>& hr) const {
        const double stl = mesh_.left.step(), str = mesh_.right.step();
        auto prod = [](const std::vector<Complex>& f, const std::vector<Complex>& g) {
            std::vector<Complex> p(f.size());
            for (std::size_t k = 0; k < f.size(); ++k) p[k] = f[k] * g[k];
            return p;
        };
        std::vector<Complex> Iul = cumulative_integral(prod(ul_, hl), stl);
        std::vector<Complex> Iur = cumulative_integral(prod(ur_, hr), str);
        std::vector<Complex> Ivl = cumulative_integral(prod(vl_, hl), stl);
        std::vector<Complex> Ivr = cumulative_integral(prod(vr_, hr), str);
        const Complex vr_total = Ivr.back(), ul_total = Iul.back(), vl_total = Ivl.back();

        GridFunction g;
        g.mesh = mesh_;
        g.left.resize(hl.size());
        g.dleft.resize(hl.size());
        g.right.resize(hr.size());
        g.dright.resize(hr.size());
        for (std::size_t k = 0; k < hl.size(); ++k) {
            Complex Rv = (vl_total - Ivl[k]) + vr_total;  // int_x^b v h
            Complex Lu = Iul[k];                          // int_{-a}^x u h
            g.left[k] = (ul_[k] * Rv + vl_[k] * Lu) / psi_minus_;
            g.dleft[k] = (dul_[k] * Rv + dvl_[k] * Lu) / psi_minus_;
        }
        for (std::size_t k = 0; k < hr.size(); ++k) {
            Complex Rv = vr_total - Ivr[k];
            Complex Lu = ul_total + Iur[k];
            g.right[k] = (ur_[k] * Rv + vr_[k] * Lu) / psi_plus_;
            g.dright[k] = (dur_[k] * Rv + dvr_[k] * Lu) / psi_plus_;
        }
        g.traces = {g.left.back(), g.dleft.back(), g.right.front(), g.dright.front(), true};
        return g;
    }

    GridFunction apply_pole(const std::vector<Complex>& hl, const std::vector<Complex>& hr) const {
        const double stl = mesh_.left.step(), str = mesh_.right.step();
        auto prod = [](const std::vector<Complex>& f, const std::vector<Complex>& g) {
            std::vector<Complex> p(f.size());
            for (std::size_t k = 0; k < f.size(); ++k) p[k] = f[k] * g[k];
            return p;
        };
        std::vector<Complex> Iul = cumulative_integral(prod(ul_, hl), stl);
        std::vector<Complex> Iwl = cumulative_integral(prod(wl_, hl), stl);
        std::vector<Complex> Iwr = cumulative_integral(prod(wr_, hr), str);
        std::vector<Complex> Ivr = cumulative_integral(prod(vr_, hr), str);

        GridFunction g;
        g.mesh = mesh_;
        g.left.resize(hl.size());
        g.dleft.resize(hl.size());
        g.right.resize(hr.size());
        g.dright.resize(hr.size());
        for (std::size_t k = 0; k < hl.size(); ++k) {
            Complex Rw = Iwl.back() - Iwl[k];  // int_x^0 w- h
            Complex Lu = Iul[k];
            g.left[k] = (ul_[k] * Rw + wl_[k] * Lu) / W_minus_;
            g.dleft[k] = (dul_[k] * Rw + dwl_[k] * Lu) / W_minus_;
        }
        for (std::size_t k = 0; k < hr.size(); ++k) {
            Complex Rv = Ivr.back() - Ivr[k];  // int_x^b v h
            Complex Lw = Iwr[k];               // int_0^x w+ h
            g.right[k] = (wr_[k] * Rv + vr_[k] * Lw) / W_plus_;
            g.dright[k] = (dwr_[k] * Rv + dvr_[k] * Lw) / W_plus_;
        }
        g.traces = {g.left.back(), g.dleft.back(), g.right.front(), g.dright.front(), true};
        return g;
    }

    ProblemSpec prob_;
    Complex lambda_;
    GreensOptions opt_;
    MeshPair mesh_;
    bool at_pole_ = false;
    PoleClassification pc_;

    std::vector<Complex> ul_, dul_, ur_, dur_;  // u on left / extended right
    std::vector<Complex> vl_, dvl_, vr_, dvr_;  // v extended left / on right
    std::vector<Complex> wl_, dwl_, wr_, dwr_;  // pole partners
    EndpointState u0m_, u0p_, v0m_, v0p_;
    Complex psi_minus_{0.0}, psi_plus_{0.0};
    Complex W_minus_{0.0}, W_plus_{0.0};
};

// Convenience wrapper: build the kernel and apply it to callable data.
inline GridFunction apply_greens(const ProblemSpec& prob, Complex lambda,
                                 const std::function<Complex(double)>& h,
                                 const GreensOptions& opt = {}) {
    return GreensKernel(prob, lambda, opt).apply(h);
}

// Pointwise kernel value off the coupling poles, by targeted integration.
inline Complex greens_value(const ProblemSpec& prob, Complex lambda, double x, double t,
                            const GreensOptions& opt = {}) {
    if (prob.near_any_coupling_pole(lambda))
        throw PoleEvaluation("greens_value: lambda lies in a coupling pole band; use the pole variant");
    InterfaceStates st = interface_states(prob, lambda, opt.ivp);
    if (std::abs(st.psi()) < opt.eigenvalue_tol * st.scale())
        throw EigenvalueLambda("kernel does not exist: characteristic function vanishes at this lambda");
    const double m = std::min(x, t), M = std::max(x, t);

    Complex u_at;
    if (m < 0.0) {
        std::vector<OdeState> rec;
        integrate_schrodinger(prob.q, lambda, -prob.a, 0.0,
                              {std::sin(prob.alpha), std::cos(prob.alpha)}, {m}, &rec, opt.ivp);
        u_at = rec.front().y;
    } else if (m == 0.0) {
        u_at = st.u_plus.value;
    } else {
        OdeState e = integrate_schrodinger(prob.q, lambda, 0.0, m,
                                           {st.u_plus.value, st.u_plus.derivative}, {}, nullptr,
                                           opt.ivp);
        u_at = e.y;
    }

    Complex v_at;
    if (M > 0.0) {
        std::vector<OdeState> rec;
        integrate_schrodinger(prob.q, lambda, prob.b, 0.0,
                              {std::sin(prob.beta), std::cos(prob.beta)}, {M}, &rec, opt.ivp);
        v_at = rec.front().y;
    } else if (M == 0.0 && m < 0.0) {
        v_at = st.v_minus.value;
    } else if (M == 0.0) {
        v_at = st.v_plus.value;
    } else {
        OdeState e = integrate_schrodinger(prob.q, lambda, 0.0, M,
                                           {st.v_minus.value, st.v_minus.derivative}, {}, nullptr,
                                           opt.ivp);
        v_at = e.y;
    }
    return u_at * v_at / st.psi();
}

// Pointwise kernel value at a coupling pole.  Opposite-side pairs are zero
// exactly; same-side pairs use the decoupled one-sided kernels.
inline Complex greens_value_pole(const ProblemSpec& prob, double lambda0, double x, double t,
                                 const GreensOptions& opt = {}) {
    PoleClassification pc = classify_pole(prob, lambda0, opt.ivp);
    auto side = [](double z) { return z < 0.0 ? -1 : +1; };  // 0 counts as the right side
    if (side(x) != side(t)) return Complex{0.0, 0.0};

    Complex l0(lambda0);
    OdeState wm, wp;
    switch (pc.kind) {
        case PoleCase::PoleOfMu:
            wm = {pc.ambiguous ? prob.nu.eval_unguarded(l0) : prob.nu.eval(l0), -1.0};
            wp = {0.0, 1.0};
            break;
        case PoleCase::PoleOfNu:
            wm = {1.0, 0.0};
            wp = {1.0, pc.ambiguous ? prob.mu.eval_unguarded(l0) : prob.mu.eval(l0)};
            break;
        case PoleCase::PoleOfBoth:
            wm = {1.0, 0.0};
            wp = {0.0, 1.0};
            break;
    }

    const double m = std::min(x, t), M = std::max(x, t);
    if (side(x) < 0) {
        std::vector<OdeState> rec;
        std::vector<double> stops = {m, 0.0};
        integrate_schrodinger(prob.q, l0, -prob.a, 0.0,
                              {std::sin(prob.alpha), std::cos(prob.alpha)}, stops, &rec, opt.ivp);
        Complex u_at = rec[0].y;
        Complex Wm = rec[1].y * wm.yp - rec[1].yp * wm.y;
        double sc = std::max(1.0, std::abs(rec[1].y) + std::abs(rec[1].yp)) *
                    std::max(1.0, std::abs(wm.y) + std::abs(wm.yp));
        if (std::abs(Wm) < opt.eigenvalue_tol * sc)
            throw EigenvalueLambda("pole kernel does not exist: left characteristic vanishes");
        OdeState w_at = integrate_schrodinger(prob.q, l0, 0.0, M, wm, {}, nullptr, opt.ivp);
        return u_at * w_at.y / Wm;
    }
    std::vector<OdeState> rec;
    std::vector<double> stops = {M, 0.0};
    integrate_schrodinger(prob.q, l0, prob.b, 0.0, {std::sin(prob.beta), std::cos(prob.beta)},
                          stops, &rec, opt.ivp);
    Complex v_at = rec[0].y;
    Complex Wp = wp.y * rec[1].yp - wp.yp * rec[1].y;
    double sc = std::max(1.0, std::abs(rec[1].y) + std::abs(rec[1].yp)) *
                std::max(1.0, std::abs(wp.y) + std::abs(wp.yp));
    if (std::abs(Wp) < opt.eigenvalue_tol * sc)
        throw EigenvalueLambda("pole kernel does not exist: right characteristic vanishes");
    OdeState w_at = integrate_schrodinger(prob.q, l0, 0.0, m, wp, {}, nullptr, opt.ivp);
    return w_at.y * v_at / Wp;
}

}  // namespace sltc
