#pragma once

// Full resolvent of the block operator: given data H = (h, h1, h2) and lambda
// in the resolvent set, produce F with (lambda - L) F = H.
//
// The function part is assembled as
//
//   f = G_lambda h + A u- chi(-a,0) + B v+ chi(0,b),
//
// where G_lambda is the kernel from greens.hpp acting on h alone and the
// scalars A, B solve a 2x2 linear system expressing the two trace couplings of
// the operator domain on f.  Off the coupling poles the system rows are
//
//   [ -u'(0-)                v'(0+) - mu(lambda) v(0+) ] [A]   [ <h1, p> ]
//   [ u(0-) + nu(lambda) u'(0-)        -v(0+)          ] [B] = [ <h2, q> ]
//
// with bilinear (unconjugated) pairings against
//
//   p_i = mu(lambda) beta_i / (lambda - gamma_i)   (slope > 0; at a node
//         gamma_I the limit -e_I / beta_I)         and  p_i = b_i/(lambda-c_i)
//         when the slope vanishes;
//   q_j = nu(lambda) alpha_j / (lambda - delta_j)  (slope > 0; at delta_J the
//         limit +e_J / alpha_J)                    and  q_j = a_j/(lambda-d_j).
//
// When lambda sits on a coupling pole the affected row degenerates after
// rescaling: at a pole c_I of mu the first row becomes [0, -v(0+)] with right
// side h1_I / b_I (slope 0) or sum_i h1_i beta_i / (c_I - gamma_i) (slope > 0),
// and symmetrically at a pole d_J of nu the second row becomes [u'(0-), 0]
// with right side -h2_J / a_J or sum_j h2_j alpha_j / (d_J - delta_j).
//
// The vector blocks of F then follow from the recovered traces of the total
// function part through the same diagonal resolve used for eigenvector lifts.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "sltc/block_vector.hpp"
#include "sltc/greens.hpp"
#include "sltc/grid.hpp"
#include "sltc/problem.hpp"
#include "sltc/transmission.hpp"

namespace sltc {

struct ResolventCoefficients {
    Complex A{0.0, 0.0}, B{0.0, 0.0};
    Complex det{0.0, 0.0};
    std::array<Complex, 2> row1{}, row2{};
    Complex r1{0.0, 0.0}, r2{0.0, 0.0};
    bool mu_pole_row = false;  // first row is the rescaled pole form
    bool nu_pole_row = false;  // second row is the rescaled pole form
};

// Determinant of the 2x2 interface system in its regular (off-pole) form.
// Satisfies det == -psi(lambda) identically.
inline Complex resolvent_determinant(const ProblemSpec& prob, Complex lambda,
                                     const IvpOptions& opt = {}) {
    EndpointState u = integrate_left(prob, lambda, 0, opt).end;
    EndpointState v = integrate_right(prob, lambda, 0, opt).end;
    Complex mu = prob.mu.eval(lambda), nu = prob.nu.eval(lambda);
    Complex r1a = -u.derivative, r1b = v.derivative - mu * v.value;
    Complex r2a = u.value + nu * u.derivative, r2b = -v.value;
    return r1a * r2b - r1b * r2a;
}

class ResolventOperator {
public:
    ResolventOperator(const ProblemSpec& prob, Complex lambda, const GreensOptions& opt = {})
        : prob_(prob), lambda_(lambda), opt_(opt), layout_(make_layout(prob)),
          kernel_(prob, lambda, opt) {}

    const MeshPair& mesh() const { return kernel_.mesh(); }
    const GreensKernel& kernel() const { return kernel_; }
    Complex lambda() const { return lambda_; }

    // Solves the interface system for the homogeneous-solution amplitudes.
    ResolventCoefficients coefficients(const std::vector<Complex>& h1,
                                       const std::vector<Complex>& h2) const {
        const EndpointState& u = kernel_.u_at_0m();
        const EndpointState& v = kernel_.v_at_0p();
        ResolventCoefficients co;

        auto mu_pole = prob_.mu.pole_near(lambda_);
        auto nu_pole = prob_.nu.pole_near(lambda_);
        const CouplingBlock& mb = layout_.mu;
        const CouplingBlock& nb = layout_.nu;

        if (mu_pole) {
            co.mu_pole_row = true;
            co.row1 = {Complex{0.0, 0.0}, -v.value};
            const double cI = prob_.mu.poles()[*mu_pole];
            if (mb.reciprocal) {
                for (std::size_t i = 0; i < mb.size(); ++i)
                    co.r1 += h1[i] * mb.weights[i] / (cI - mb.nodes[i]);
            } else {
                co.r1 = h1[*mu_pole] / mb.weights[*mu_pole];
            }
        } else {
            Complex muv = prob_.mu.eval(lambda_);
            co.row1 = {-u.derivative, v.derivative - muv * v.value};
            auto I = mb.node_near(lambda_);
            for (std::size_t i = 0; i < mb.size(); ++i) {
                Complex p;
                if (mb.reciprocal)
                    p = (I && i == *I) ? Complex{-1.0 / mb.weights[i]}
                                       : muv * mb.weights[i] / (lambda_ - mb.nodes[i]);
                else
                    p = mb.weights[i] / (lambda_ - mb.nodes[i]);
                co.r1 += h1[i] * p;
            }
        }

        if (nu_pole) {
            co.nu_pole_row = true;
            co.row2 = {u.derivative, Complex{0.0, 0.0}};
            const double dJ = prob_.nu.poles()[*nu_pole];
            if (nb.reciprocal) {
                for (std::size_t j = 0; j < nb.size(); ++j)
                    co.r2 += h2[j] * nb.weights[j] / (dJ - nb.nodes[j]);
            } else {
                co.r2 = -h2[*nu_pole] / nb.weights[*nu_pole];
            }
        } else {
            Complex nuv = prob_.nu.eval(lambda_);
            co.row2 = {u.value + nuv * u.derivative, -v.value};
            auto J = nb.node_near(lambda_);
            for (std::size_t j = 0; j < nb.size(); ++j) {
                Complex q;
                if (nb.reciprocal)
                    q = (J && j == *J) ? Complex{1.0 / nb.weights[j]}
                                       : nuv * nb.weights[j] / (lambda_ - nb.nodes[j]);
                else
                    q = nb.weights[j] / (lambda_ - nb.nodes[j]);
                co.r2 += h2[j] * q;
            }
        }

        co.det = co.row1[0] * co.row2[1] - co.row1[1] * co.row2[0];
        double scale = std::max(1.0, (std::abs(co.row1[0]) + std::abs(co.row1[1])) *
                                         (std::abs(co.row2[0]) + std::abs(co.row2[1])));
        if (std::abs(co.det) < opt_.eigenvalue_tol * scale)
            throw EigenvalueLambda("resolvent does not exist: interface system is singular");
        co.A = (co.r1 * co.row2[1] - co.row1[1] * co.r2) / co.det;
        co.B = (co.row1[0] * co.r2 - co.r1 * co.row2[0]) / co.det;
        return co;
    }

    BlockVector apply(const BlockVector& H) const {
        const MeshPair& m = kernel_.mesh();
        std::vector<Complex> h1 = H.v1, h2 = H.v2;
        if (h1.empty()) h1.assign(layout_.dim_mu(), Complex{});
        if (h2.empty()) h2.assign(layout_.dim_nu(), Complex{});
        if (h1.size() != layout_.dim_mu() || h2.size() != layout_.dim_nu())
            throw std::invalid_argument("ResolventOperator::apply: block size mismatch");

        GridFunction g;
        if (!H.fn.empty()) {
            g = kernel_.apply(H.fn.left, H.fn.right);
        } else {
            g = GridFunction::zero(m);
            g.dleft.assign(m.left.nodes(), Complex{});
            g.dright.assign(m.right.nodes(), Complex{});
        }

        ResolventCoefficients co = coefficients(h1, h2);
        const auto& ul = kernel_.u_left();
        const auto& dul = kernel_.u_left_deriv();
        const auto& vr = kernel_.v_right();
        const auto& dvr = kernel_.v_right_deriv();
        for (std::size_t k = 0; k < g.left.size(); ++k) {
            g.left[k] += co.A * ul[k];
            g.dleft[k] += co.A * dul[k];
        }
        for (std::size_t k = 0; k < g.right.size(); ++k) {
            g.right[k] += co.B * vr[k];
            g.dright[k] += co.B * dvr[k];
        }
        g.traces.value_m += co.A * kernel_.u_at_0m().value;
        g.traces.deriv_m += co.A * kernel_.u_at_0m().derivative;
        g.traces.value_p += co.B * kernel_.v_at_0p().value;
        g.traces.deriv_p += co.B * kernel_.v_at_0p().derivative;

        BlockVector F;
        F.fn = std::move(g);
        F.v1 = recover_mu_block(layout_.mu, lambda_, F.fn.traces, h1);
        F.v2 = recover_nu_block(layout_.nu, lambda_, F.fn.traces, h2);
        return F;
    }

    BlockVector apply(const std::function<Complex(double)>& h, const std::vector<Complex>& h1,
                      const std::vector<Complex>& h2) const {
        const MeshPair& m = kernel_.mesh();
        BlockVector H;
        H.fn.mesh = m;
        H.fn.left.resize(m.left.nodes());
        H.fn.right.resize(m.right.nodes());
        for (std::size_t k = 0; k < H.fn.left.size(); ++k) H.fn.left[k] = h(m.left.node(k));
        for (std::size_t k = 0; k < H.fn.right.size(); ++k) H.fn.right[k] = h(m.right.node(k));
        H.v1 = h1;
        H.v2 = h2;
        return apply(H);
    }

private:
    ProblemSpec prob_;
    Complex lambda_;
    GreensOptions opt_;
    BlockLayout layout_;
    GreensKernel kernel_;
};

inline BlockVector resolvent_apply(const ProblemSpec& prob, Complex lambda, const BlockVector& H,
                                   const GreensOptions& opt = {}) {
    return ResolventOperator(prob, lambda, opt).apply(H);
}

}  // namespace sltc
