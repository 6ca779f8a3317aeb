#pragma once

// The operator-theoretic realization.  State space: L2 over both segments plus
// one finite block per coupling.  The block attached to mu has size equal to
// the reciprocal expansion length when the slope is positive (expansion nodes
// gamma, weights beta) and to the pole count otherwise (nodes c, weights b);
// likewise for nu.  A block vector Y = (y, y1, y2) lies in the operator domain
// when y satisfies both boundary conditions and the two trace couplings
//
//   slope > 0:  -y(0+) + sigma (jump y') = <y1, beta>     (mu side)
//               y'(0-) - tau  (jump y)   = <y2, alpha>    (nu side)
//   slope = 0:  (jump y') - xi  y(0+)    = <y1, b>
//               -(jump y) + zeta y'(0-)  = <y2, a>
//
// and the operator acts row-wise as
//
//   (L Y)_0  = -y'' + q y
//   (L Y)_1i = w1_i * t1 + n1_i * y1_i      t1 = jump y' (slope>0) or y(0+)
//   (L Y)_2j = w2_j * t2 + n2_j * y2_j      t2 = jump y  (slope>0) or y'(0-)
//
// with (w, n) the block weights and nodes.  Everything below is phrased
// through that block view, so the slope>0 and slope=0 branches share code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "sltc/grid.hpp"
#include "sltc/problem.hpp"
#include "sltc/shooting.hpp"
#include "sltc/transmission.hpp"

namespace sltc {

// ── block view of one coupling ───────────────────────────────────────────────

struct CouplingBlock {
    bool reciprocal = false;        // slope > 0: expansion data; else pole data
    double constant = 0.0;          // sigma/tau when reciprocal, xi/zeta otherwise
    std::vector<double> nodes;
    std::vector<double> weights;    // square roots of the residue squares

    std::size_t size() const { return nodes.size(); }

    std::optional<std::size_t> node_near(Complex lambda) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (std::abs(lambda - nodes[i]) < pole_proximity_tol(nodes[i])) return i;
        return std::nullopt;
    }
};

inline CouplingBlock make_block(const RationalCoupling& cp) {
    CouplingBlock blk;
    if (cp.slope() > 0.0) {
        ReciprocalExpansion r = cp.reciprocal();
        blk.reciprocal = true;
        blk.constant = r.constant;
        blk.nodes = r.poles;
        for (double rs : r.residue_squares) blk.weights.push_back(std::sqrt(rs));
    } else {
        blk.constant = cp.offset();
        blk.nodes = cp.poles();
        for (double rs : cp.residue_squares()) blk.weights.push_back(std::sqrt(rs));
    }
    return blk;
}

struct BlockLayout {
    CouplingBlock mu, nu;
    std::size_t dim_mu() const { return mu.size(); }
    std::size_t dim_nu() const { return nu.size(); }
};

inline BlockLayout make_layout(const ProblemSpec& prob) {
    return {make_block(prob.mu), make_block(prob.nu)};
}

// ── block vectors ────────────────────────────────────────────────────────────

struct BlockVector {
    GridFunction fn;
    std::vector<Complex> v1, v2;

    static BlockVector zero(const ProblemSpec& prob, const MeshPair& mesh) {
        BlockLayout lay = make_layout(prob);
        BlockVector Y;
        Y.fn = GridFunction::zero(mesh);
        Y.v1.assign(lay.dim_mu(), Complex{});
        Y.v2.assign(lay.dim_nu(), Complex{});
        return Y;
    }
};

// Hermitian inner product of the state space.
inline Complex hermitian_inner(const BlockVector& F, const BlockVector& G) {
    if (F.v1.size() != G.v1.size() || F.v2.size() != G.v2.size())
        throw std::invalid_argument("hermitian_inner: block size mismatch");
    Complex acc = GridFunction::l2_inner(F.fn, G.fn);
    for (std::size_t i = 0; i < F.v1.size(); ++i) acc += F.v1[i] * std::conj(G.v1[i]);
    for (std::size_t j = 0; j < F.v2.size(); ++j) acc += F.v2[j] * std::conj(G.v2[j]);
    return acc;
}

inline double block_norm(const BlockVector& Y) {
    return std::sqrt(std::abs(hermitian_inner(Y, Y)));
}

// ── trace conditions ─────────────────────────────────────────────────────────

// mu-side domain condition residual.
inline Complex mu_condition_residual(const CouplingBlock& blk, const Traces& t,
                                     const std::vector<Complex>& v1) {
    Complex pair = 0.0;
    for (std::size_t i = 0; i < blk.size(); ++i) pair += blk.weights[i] * v1[i];
    if (blk.reciprocal) return -t.value_p + blk.constant * t.jump_deriv() - pair;
    return t.jump_deriv() - blk.constant * t.value_p - pair;
}

// nu-side domain condition residual.
inline Complex nu_condition_residual(const CouplingBlock& blk, const Traces& t,
                                     const std::vector<Complex>& v2) {
    Complex pair = 0.0;
    for (std::size_t j = 0; j < blk.size(); ++j) pair += blk.weights[j] * v2[j];
    if (blk.reciprocal) return t.deriv_m - blk.constant * t.jump_value() - pair;
    return -t.jump_value() + blk.constant * t.deriv_m - pair;
}

// Vector rows of the operator.
inline std::vector<Complex> mu_block_row(const CouplingBlock& blk, const Traces& t,
                                         const std::vector<Complex>& v1) {
    Complex trace = blk.reciprocal ? t.jump_deriv() : t.value_p;
    std::vector<Complex> out(blk.size());
    for (std::size_t i = 0; i < blk.size(); ++i)
        out[i] = blk.weights[i] * trace + blk.nodes[i] * v1[i];
    return out;
}

inline std::vector<Complex> nu_block_row(const CouplingBlock& blk, const Traces& t,
                                         const std::vector<Complex>& v2) {
    Complex trace = blk.reciprocal ? t.jump_value() : t.deriv_m;
    std::vector<Complex> out(blk.size());
    for (std::size_t j = 0; j < blk.size(); ++j)
        out[j] = blk.weights[j] * trace + blk.nodes[j] * v2[j];
    return out;
}

// Recover the mu-side block from function traces and data h1 so that the
// vector row of (lambda - L) returns h1.  Away from the expansion nodes this
// is the diagonal resolve (lambda - n1)^{-1} (h1 + w1 * t1); when lambda sits
// on node I that component is fixed by the domain condition instead.
inline std::vector<Complex> recover_mu_block(const CouplingBlock& blk, Complex lambda,
                                             const Traces& t, const std::vector<Complex>& h1) {
    std::vector<Complex> out(blk.size());
    Complex trace = blk.reciprocal ? t.jump_deriv() : t.value_p;
    auto I = blk.node_near(lambda);
    for (std::size_t i = 0; i < blk.size(); ++i) {
        if (I && i == *I) continue;
        out[i] = (h1[i] + blk.weights[i] * trace) / (lambda - blk.nodes[i]);
    }
    if (I) {
        Complex rest = 0.0;
        for (std::size_t i = 0; i < blk.size(); ++i)
            if (i != *I) rest += blk.weights[i] * out[i];
        Complex target = blk.reciprocal ? -t.value_p + blk.constant * t.jump_deriv()
                                        : t.jump_deriv() - blk.constant * t.value_p;
        out[*I] = (target - rest) / blk.weights[*I];
    }
    return out;
}

inline std::vector<Complex> recover_nu_block(const CouplingBlock& blk, Complex lambda,
                                             const Traces& t, const std::vector<Complex>& h2) {
    std::vector<Complex> out(blk.size());
    Complex trace = blk.reciprocal ? t.jump_value() : t.deriv_m;
    auto J = blk.node_near(lambda);
    for (std::size_t j = 0; j < blk.size(); ++j) {
        if (J && j == *J) continue;
        out[j] = (h2[j] + blk.weights[j] * trace) / (lambda - blk.nodes[j]);
    }
    if (J) {
        Complex rest = 0.0;
        for (std::size_t j = 0; j < blk.size(); ++j)
            if (j != *J) rest += blk.weights[j] * out[j];
        Complex target = blk.reciprocal ? t.deriv_m - blk.constant * t.jump_value()
                                        : -t.jump_value() + blk.constant * t.deriv_m;
        out[*J] = (target - rest) / blk.weights[*J];
    }
    return out;
}

// ── applying the operator ────────────────────────────────────────────────────

namespace detail {

// -f'' + q f on one side.  Uses the stored array when present; otherwise a
// fourth-order interior stencil with second-order fallbacks near the segment
// ends (the two one-sided rows contribute O(h^2.5) to the L2 norm).
inline std::vector<Complex> apply_ell_side(const Potential& q, const SideGrid& g,
                                           const std::vector<Complex>& f,
                                           const std::vector<Complex>& stored) {
    if (!stored.empty()) return stored;
    const std::size_t n = f.size();
    if (n < 6) throw MeshTooCoarse("differential expression needs >= 6 nodes per side");
    const double h = g.step();
    const double h2 = h * h;
    std::vector<Complex> out(n);
    auto q_at = [&](std::size_t k) { return q(g.node(k)); };
    out[0] = -(2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2 + q_at(0) * f[0];
    out[1] = -(f[0] - 2.0 * f[1] + f[2]) / h2 + q_at(1) * f[1];
    for (std::size_t k = 2; k + 2 < n; ++k) {
        Complex d2 = (-f[k - 2] + 16.0 * f[k - 1] - 30.0 * f[k] + 16.0 * f[k + 1] - f[k + 2]) /
                     (12.0 * h2);
        out[k] = -d2 + q_at(k) * f[k];
    }
    out[n - 2] = -(f[n - 3] - 2.0 * f[n - 2] + f[n - 1]) / h2 + q_at(n - 2) * f[n - 2];
    out[n - 1] = -(2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2 +
                 q_at(n - 1) * f[n - 1];
    return out;
}

}  // namespace detail

inline constexpr double kDomainConditionTol = 1e-6;

// L Y for Y in the operator domain.  Domain membership is checked first: both
// boundary conditions and both trace couplings must hold to a relative
// tolerance, else DomainViolation names the offender.
inline BlockVector apply_L(const ProblemSpec& prob, const BlockVector& Y,
                           double domain_tol = kDomainConditionTol) {
    BlockLayout lay = make_layout(prob);
    if (Y.v1.size() != lay.dim_mu() || Y.v2.size() != lay.dim_nu())
        throw std::invalid_argument("apply_L: block sizes do not match the problem layout");
    if (!Y.fn.traces.set) throw DomainViolation("apply_L: interface traces not set");
    if (!Y.fn.has_derivatives())
        throw DomainViolation("apply_L: derivative data required to check the domain conditions");

    const Traces& t = Y.fn.traces;
    double vec_scale = 0.0;
    for (const Complex& c : Y.v1) vec_scale += std::abs(c);
    for (const Complex& c : Y.v2) vec_scale += std::abs(c);
    double scale = std::max(1.0, std::abs(t.value_m) + std::abs(t.deriv_m) + std::abs(t.value_p) +
                                     std::abs(t.deriv_p) + vec_scale);

    Complex bc_a = Y.fn.left.front() * std::cos(prob.alpha) - Y.fn.dleft.front() * std::sin(prob.alpha);
    if (std::abs(bc_a) > domain_tol * scale)
        throw DomainViolation("boundary condition at -a violated; residual " + std::to_string(std::abs(bc_a)));
    Complex bc_b = Y.fn.right.back() * std::cos(prob.beta) - Y.fn.dright.back() * std::sin(prob.beta);
    if (std::abs(bc_b) > domain_tol * scale)
        throw DomainViolation("boundary condition at b violated; residual " + std::to_string(std::abs(bc_b)));
    Complex dc_mu = mu_condition_residual(lay.mu, t, Y.v1);
    if (std::abs(dc_mu) > domain_tol * scale)
        throw DomainViolation("mu-side trace coupling violated; residual " + std::to_string(std::abs(dc_mu)));
    Complex dc_nu = nu_condition_residual(lay.nu, t, Y.v2);
    if (std::abs(dc_nu) > domain_tol * scale)
        throw DomainViolation("nu-side trace coupling violated; residual " + std::to_string(std::abs(dc_nu)));

    BlockVector out;
    out.fn.mesh = Y.fn.mesh;
    out.fn.left = detail::apply_ell_side(prob.q, Y.fn.mesh.left, Y.fn.left, Y.fn.lleft);
    out.fn.right = detail::apply_ell_side(prob.q, Y.fn.mesh.right, Y.fn.right, Y.fn.lright);
    out.fn.traces.set = false;
    out.v1 = mu_block_row(lay.mu, t, Y.v1);
    out.v2 = nu_block_row(lay.nu, t, Y.v2);
    return out;
}

// ── admissible vectors and eigenvector lifting ──────────────────────────────

struct AdmissibleSeed {
    Complex t_left{1.0, 0.0}, t_right{1.0, 0.0};  // amplitudes of the boundary-direction terms
    Complex value_m{1.0, 0.0}, deriv_m{0.5, 0.0};
    Complex value_p{0.7, 0.0}, deriv_p{-0.3, 0.0};
    std::vector<Complex> v1_guess, v2_guess;  // free parts, corrected onto the conditions
};

inline AdmissibleSeed random_admissible_seed(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto c = [&] { return Complex(U(rng), U(rng)); };
    AdmissibleSeed s;
    s.t_left = c();
    s.t_right = c();
    s.value_m = c();
    s.deriv_m = c();
    s.value_p = c();
    s.deriv_p = c();
    for (int i = 0; i < 8; ++i) {
        s.v1_guess.push_back(c());
        s.v2_guess.push_back(c());
    }
    return s;
}

// Smooth cubic-per-side member of the operator domain with prescribed traces.
// Branches without a vector block pin the corresponding 0+ trace instead (the
// trace coupling then has no free block to absorb it).  Carries exact
// derivative and differential-expression arrays.
inline BlockVector make_admissible(const ProblemSpec& prob, const MeshPair& mesh,
                                   const AdmissibleSeed& seed) {
    BlockLayout lay = make_layout(prob);

    Complex value_m = seed.value_m, deriv_m = seed.deriv_m;
    Complex value_p = seed.value_p, deriv_p = seed.deriv_p;
    if (lay.dim_nu() == 0)  // jump of y pinned by  -(jump y) + zeta y'(0-) = 0
        value_p = value_m + lay.nu.constant * deriv_m;
    if (lay.dim_mu() == 0)  // jump of y' pinned by  (jump y') - xi y(0+) = 0
        deriv_p = deriv_m + lay.mu.constant * value_p;

    const double a = prob.a, b = prob.b;
    // left cubic in s = x + a: t*(sin(alpha) + s cos(alpha)) + p2 s^2 + p3 s^3
    Complex R1 = value_m - seed.t_left * (std::sin(prob.alpha) + a * std::cos(prob.alpha));
    Complex R2 = deriv_m - seed.t_left * std::cos(prob.alpha);
    Complex p2 = 3.0 * R1 / (a * a) - R2 / a;
    Complex p3 = (R1 - p2 * a * a) / (a * a * a);
    // right cubic in s = b - x: t*(sin(beta) - s cos(beta)) + w2 s^2 + w3 s^3
    Complex Q1 = value_p - seed.t_right * (std::sin(prob.beta) - b * std::cos(prob.beta));
    Complex Q2 = -deriv_p + seed.t_right * std::cos(prob.beta);
    Complex w2 = 3.0 * Q1 / (b * b) - Q2 / b;
    Complex w3 = (Q1 - w2 * b * b) / (b * b * b);

    BlockVector Y;
    Y.fn.mesh = mesh;
    auto fill_side = [&](const SideGrid& g, bool left_side) {
        std::vector<Complex> f(g.nodes()), df(g.nodes()), lf(g.nodes());
        for (std::size_t k = 0; k < g.nodes(); ++k) {
            double x = g.node(k);
            if (left_side) {
                double s = x + a;
                Complex val = seed.t_left * (std::sin(prob.alpha) + s * std::cos(prob.alpha)) +
                              p2 * s * s + p3 * s * s * s;
                Complex der = seed.t_left * std::cos(prob.alpha) + 2.0 * p2 * s + 3.0 * p3 * s * s;
                Complex dd = 2.0 * p2 + 6.0 * p3 * s;
                f[k] = val;
                df[k] = der;
                lf[k] = -dd + prob.q(x) * val;
            } else {
                double s = b - x;
                Complex val = seed.t_right * (std::sin(prob.beta) - s * std::cos(prob.beta)) +
                              w2 * s * s + w3 * s * s * s;
                Complex der = -(-seed.t_right * std::cos(prob.beta) + 2.0 * w2 * s + 3.0 * w3 * s * s);
                Complex dd = 2.0 * w2 + 6.0 * w3 * s;
                f[k] = val;
                df[k] = der;
                lf[k] = -dd + prob.q(x) * val;
            }
        }
        if (left_side) {
            Y.fn.left = std::move(f);
            Y.fn.dleft = std::move(df);
            Y.fn.lleft = std::move(lf);
        } else {
            Y.fn.right = std::move(f);
            Y.fn.dright = std::move(df);
            Y.fn.lright = std::move(lf);
        }
    };
    fill_side(mesh.left, true);
    fill_side(mesh.right, false);
    Y.fn.traces = {value_m, deriv_m, value_p, deriv_p, true};

    // project the guessed blocks onto the trace couplings along the weights
    auto correct = [](const CouplingBlock& blk, Complex target, const std::vector<Complex>& guess) {
        std::vector<Complex> v(blk.size());
        double wsq = 0.0;
        Complex have = 0.0;
        for (std::size_t i = 0; i < blk.size(); ++i) {
            v[i] = (i < guess.size()) ? guess[i] : Complex{};
            wsq += blk.weights[i] * blk.weights[i];
            have += blk.weights[i] * v[i];
        }
        for (std::size_t i = 0; i < blk.size(); ++i)
            v[i] += blk.weights[i] * (target - have) / wsq;
        return v;
    };
    const Traces& t = Y.fn.traces;
    if (lay.dim_mu() > 0) {
        Complex target = lay.mu.reciprocal ? -t.value_p + lay.mu.constant * t.jump_deriv()
                                           : t.jump_deriv() - lay.mu.constant * t.value_p;
        Y.v1 = correct(lay.mu, target, seed.v1_guess);
    }
    if (lay.dim_nu() > 0) {
        Complex target = lay.nu.reciprocal ? t.deriv_m - lay.nu.constant * t.jump_value()
                                           : -t.jump_value() + lay.nu.constant * t.deriv_m;
        Y.v2 = correct(lay.nu, target, seed.v2_guess);
    }
    return Y;
}

// Lift of a simple (regular) eigenvalue's eigenfunction: the left shooting
// solution extended through the interface, with the blocks recovered from its
// traces.  No stored differential expression, so residual tests stay honest.
inline BlockVector lift_regular_eigenfunction(const ProblemSpec& prob, double lambda,
                                              const MeshPair& mesh, const IvpOptions& opt = {}) {
    BlockLayout lay = make_layout(prob);
    ShotResult left = integrate_left(prob, Complex(lambda), mesh.left.intervals, opt);
    EndpointState at0p = extend_u(prob, Complex(lambda), left.end);
    std::vector<OdeState> states;
    std::vector<double> nodes = mesh.right.node_list();
    integrate_schrodinger(prob.q, Complex(lambda), 0.0, prob.b, {at0p.value, at0p.derivative},
                          nodes, &states, opt);
    BlockVector Y;
    Y.fn.mesh = mesh;
    Y.fn.left = left.trajectory.y;
    Y.fn.dleft = left.trajectory.yp;
    for (const OdeState& s : states) {
        Y.fn.right.push_back(s.y);
        Y.fn.dright.push_back(s.yp);
    }
    Y.fn.traces = {left.end.value, left.end.derivative, at0p.value, at0p.derivative, true};
    std::vector<Complex> zero1(lay.dim_mu(), Complex{}), zero2(lay.dim_nu(), Complex{});
    Y.v1 = recover_mu_block(lay.mu, Complex(lambda), Y.fn.traces, zero1);
    Y.v2 = recover_nu_block(lay.nu, Complex(lambda), Y.fn.traces, zero2);
    return Y;
}

// Lift at a coupling pole: the eigenfunction is supported on one side and
// vanishes identically on the other.
inline BlockVector lift_pole_eigenfunction(const ProblemSpec& prob, double lambda0,
                                           bool left_supported, const MeshPair& mesh,
                                           const IvpOptions& opt = {}) {
    BlockLayout lay = make_layout(prob);
    BlockVector Y = BlockVector::zero(prob, mesh);
    Y.fn.dleft.assign(mesh.left.nodes(), Complex{});
    Y.fn.dright.assign(mesh.right.nodes(), Complex{});
    if (left_supported) {
        ShotResult left = integrate_left(prob, Complex(lambda0), mesh.left.intervals, opt);
        Y.fn.left = left.trajectory.y;
        Y.fn.dleft = left.trajectory.yp;
        Y.fn.traces = {left.end.value, left.end.derivative, Complex{}, Complex{}, true};
    } else {
        ShotResult right = integrate_right(prob, Complex(lambda0), mesh.right.intervals, opt);
        Y.fn.right = right.trajectory.y;
        Y.fn.dright = right.trajectory.yp;
        Y.fn.traces = {Complex{}, Complex{}, right.end.value, right.end.derivative, true};
    }
    std::vector<Complex> zero1(lay.dim_mu(), Complex{}), zero2(lay.dim_nu(), Complex{});
    Y.v1 = recover_mu_block(lay.mu, Complex(lambda0), Y.fn.traces, zero1);
    Y.v2 = recover_nu_block(lay.nu, Complex(lambda0), Y.fn.traces, zero2);
    return Y;
}

// ── symmetry check ───────────────────────────────────────────────────────────

struct SymmetryDefect {
    double defect = 0.0;  // |(LF, G) - (F, LG)|
    double scale = 1.0;
};

inline SymmetryDefect verify_symmetry(const ProblemSpec& prob, const BlockVector& F,
                                      const BlockVector& G) {
    BlockVector LF = apply_L(prob, F);
    BlockVector LG = apply_L(prob, G);
    Complex lhs = hermitian_inner(LF, G);
    Complex rhs = hermitian_inner(F, LG);
    SymmetryDefect d;
    d.defect = std::abs(lhs - rhs);
    d.scale = std::max(1.0, block_norm(LF) * block_norm(G) + block_norm(F) * block_norm(LG));
    return d;
}

}  // namespace sltc
