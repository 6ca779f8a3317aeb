#pragma once

// Dense finite-difference discretization of the block operator, used as an
// independent cross-check on the shooting/scan machinery.  Second-order
// central stencils act on the interior nodes of each segment; the four
// lambda-free constraints (two boundary conditions, two trace couplings,
// with one-sided second-order trace stencils) eliminate the segment-end
// unknowns, leaving a reduced matrix over
//
//   [ left interior | right interior | mu block | nu block ].
//
// The reduced matrix is a consistent discretization but not symmetric: the
// end-node elimination leaves an interface-localized antisymmetric part (a
// handful of entries of size comparable to the stencil weights), so
// `eigenvalues` runs the general dense eigensolver and checks that the
// spectrum comes out real, which is itself a cross-check on the assembly.
// `symmetry_defect` reports the weighted asymmetry of the interior away from
// the four interface-adjacent rows, which does shrink linearly with h.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "sltc/block_vector.hpp"
#include "sltc/errors.hpp"
#include "sltc/problem.hpp"

namespace sltc {

struct DiscretizedOperator {
    Eigen::MatrixXd A;   // reduced operator matrix
    Eigen::VectorXd w;   // quadrature weights
    std::size_t n_left = 0, n_right = 0;  // intervals per side
    BlockLayout layout;

    std::size_t dim() const { return static_cast<std::size_t>(A.rows()); }

    double symmetry_defect() const {
        Eigen::MatrixXd WA = w.asDiagonal() * A;
        Eigen::MatrixXd D = WA - WA.transpose();
        // blank the rows and columns of the function nodes adjacent to an
        // eliminated end node, where the elimination concentrates its asymmetry
        const Eigen::Index il = static_cast<Eigen::Index>(n_left) - 1;
        const Eigen::Index ir = static_cast<Eigen::Index>(n_right) - 1;
        for (Eigen::Index k : {Eigen::Index{0}, Eigen::Index{1}, il - 2, il - 1, il, il + 1,
                               il + ir - 2, il + ir - 1}) {
            D.row(k).setZero();
            D.col(k).setZero();
        }
        return D.cwiseAbs().maxCoeff();
    }

    std::vector<std::complex<double>> eigenvalues_complex() const {
        Eigen::EigenSolver<Eigen::MatrixXd> es(A);
        if (es.info() != Eigen::Success)
            throw EigensolverFailure("dense eigensolve did not converge");
        std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                              es.eigenvalues().data() + es.eigenvalues().size());
        return out;
    }

    std::vector<double> eigenvalues() const {
        std::vector<double> out;
        out.reserve(dim());
        double scale = A.cwiseAbs().maxCoeff();
        for (std::complex<double> ev : eigenvalues_complex()) {
            if (std::abs(ev.imag()) > 1e-7 * std::max(1.0, scale))
                throw EigensolverFailure("discretized operator produced a complex eigenvalue");
            out.push_back(ev.real());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // The `count` eigenvalues nearest `shift`, by shift-invert subspace
    // iteration (full dense solves get expensive past a few hundred nodes).
    std::vector<double> eigenvalues_near(double shift, std::size_t count,
                                         std::size_t iterations = 50) const {
        const Eigen::Index n = A.rows();
        const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(count) + 4, n);
        Eigen::MatrixXd shifted = A - shift * Eigen::MatrixXd::Identity(n, n);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);

        std::mt19937 rng(1234);
        std::normal_distribution<double> N01;
        Eigen::MatrixXd V(n, k);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < k; ++j) V(i, j) = N01(rng);
        auto orthonormalize = [&](Eigen::MatrixXd& M) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
            M = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
        };
        orthonormalize(V);
        for (std::size_t it = 0; it < iterations; ++it) {
            V = lu.solve(V);
            orthonormalize(V);
        }
        Eigen::MatrixXd small = V.transpose() * A * V;
        Eigen::EigenSolver<Eigen::MatrixXd> es(small);
        if (es.info() != Eigen::Success)
            throw EigensolverFailure("projected eigensolve did not converge");
        std::vector<std::complex<double>> ritz(es.eigenvalues().data(),
                                               es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(ritz.begin(), ritz.end(), [&](std::complex<double> x, std::complex<double> y) {
            return std::abs(x - shift) < std::abs(y - shift);
        });
        std::vector<double> out;
        for (std::size_t i = 0; i < count && i < ritz.size(); ++i) {
            if (std::abs(ritz[i].imag()) > 1e-7 * std::max(1.0, std::abs(ritz[i])))
                throw EigensolverFailure("shift-invert iteration produced a complex eigenvalue");
            out.push_back(ritz[i].real());
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline DiscretizedOperator assemble_fd(const ProblemSpec& prob, double h) {
    if (h <= 0.0) throw std::invalid_argument("assemble_fd: step must be positive");
    const std::size_t nl = static_cast<std::size_t>(std::llround(prob.a / h));
    const std::size_t nr = static_cast<std::size_t>(std::llround(prob.b / h));
    if (nl < 4 || nr < 4)
        throw MeshTooCoarse("assemble_fd: need at least 4 intervals per side");
    const double hl = prob.a / static_cast<double>(nl);
    const double hr = prob.b / static_cast<double>(nr);

    BlockLayout lay = make_layout(prob);
    const std::size_t il = nl - 1;  // interior node counts
    const std::size_t ir = nr - 1;
    const std::size_t N = lay.dim_mu(), M = lay.dim_nu();
    const std::size_t dim = il + ir + N + M;

    // retained indexing
    auto L = [&](std::size_t k) { return k - 1; };            // left node k, 1..nl-1
    auto R = [&](std::size_t k) { return il + k - 1; };       // right node k, 1..nr-1
    auto B1 = [&](std::size_t i) { return il + ir + i; };
    auto B2 = [&](std::size_t j) { return il + ir + N + j; };
    // eliminated ordering: 0 = left end (-a), 1 = left trace (0-),
    //                      2 = right trace (0+), 3 = right end (b)
    enum { eA = 0, eM = 1, eP = 2, eB = 3 };

    Eigen::Matrix4d E = Eigen::Matrix4d::Zero();
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(4, static_cast<Eigen::Index>(dim));

    const double sa = std::sin(prob.alpha), ca = std::cos(prob.alpha);
    const double sb = std::sin(prob.beta), cb = std::cos(prob.beta);

    // y(-a) cos a = y'(-a) sin a with the forward one-sided derivative
    E(0, eA) = ca + 3.0 * sa / (2.0 * hl);
    F(0, L(1)) = -2.0 * sa / hl;
    F(0, L(2)) = sa / (2.0 * hl);

    // y(b) cos b = y'(b) sin b with the backward one-sided derivative
    E(1, eB) = cb - 3.0 * sb / (2.0 * hr);
    F(1, R(nr - 1)) = 2.0 * sb / hr;
    F(1, R(nr - 2)) = -sb / (2.0 * hr);

    // trace-derivative stencils: Dp at 0+, Dm at 0-
    const double dp0 = -3.0 / (2.0 * hr), dp1 = 4.0 / (2.0 * hr), dp2 = -1.0 / (2.0 * hr);
    const double dm0 = 3.0 / (2.0 * hl), dm1 = -4.0 / (2.0 * hl), dm2 = 1.0 / (2.0 * hl);

    // mu-side coupling
    if (lay.mu.reciprocal) {
        const double s = lay.mu.constant;
        E(2, eP) = -1.0 + s * dp0;
        F(2, R(1)) = s * dp1;
        F(2, R(2)) = s * dp2;
        E(2, eM) = -s * dm0;
        F(2, L(nl - 1)) = -s * dm1;
        F(2, L(nl - 2)) = -s * dm2;
    } else {
        E(2, eP) = dp0 - lay.mu.constant;
        F(2, R(1)) = dp1;
        F(2, R(2)) = dp2;
        E(2, eM) = -dm0;
        F(2, L(nl - 1)) = -dm1;
        F(2, L(nl - 2)) = -dm2;
    }
    for (std::size_t i = 0; i < N; ++i) F(2, B1(i)) = -lay.mu.weights[i];

    // nu-side coupling
    if (lay.nu.reciprocal) {
        const double t = lay.nu.constant;
        E(3, eM) = dm0 + t;
        F(3, L(nl - 1)) = dm1;
        F(3, L(nl - 2)) = dm2;
        E(3, eP) = -t;
    } else {
        const double z = lay.nu.constant;
        E(3, eP) = -1.0;
        E(3, eM) = 1.0 + z * dm0;
        F(3, L(nl - 1)) = z * dm1;
        F(3, L(nl - 2)) = z * dm2;
    }
    for (std::size_t j = 0; j < M; ++j) F(3, B2(j)) = -lay.nu.weights[j];

    Eigen::FullPivLU<Eigen::Matrix4d> lu(E);
    if (!lu.isInvertible())
        throw MeshTooCoarse("assemble_fd: end-node elimination is singular at this step");
    Eigen::MatrixXd S = -lu.solve(F);  // eliminated = S * retained

    Eigen::MatrixXd Ar = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                               static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd Ae = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), 4);

    const double wl2 = 1.0 / (hl * hl), wr2 = 1.0 / (hr * hr);
    for (std::size_t k = 1; k < nl; ++k) {
        const double x = -prob.a + static_cast<double>(k) * hl;
        Eigen::Index row = static_cast<Eigen::Index>(L(k));
        Ar(row, L(k)) = 2.0 * wl2 + prob.q(x);
        if (k > 1) Ar(row, L(k - 1)) = -wl2; else Ae(row, eA) = -wl2;
        if (k < nl - 1) Ar(row, L(k + 1)) = -wl2; else Ae(row, eM) = -wl2;
    }
    for (std::size_t k = 1; k < nr; ++k) {
        const double x = static_cast<double>(k) * hr;
        Eigen::Index row = static_cast<Eigen::Index>(R(k));
        Ar(row, R(k)) = 2.0 * wr2 + prob.q(x);
        if (k > 1) Ar(row, R(k - 1)) = -wr2; else Ae(row, eP) = -wr2;
        if (k < nr - 1) Ar(row, R(k + 1)) = -wr2; else Ae(row, eB) = -wr2;
    }
    for (std::size_t i = 0; i < N; ++i) {
        Eigen::Index row = static_cast<Eigen::Index>(B1(i));
        const double wi = lay.mu.weights[i];
        if (lay.mu.reciprocal) {  // weight * (jump y') + node * y1
            Ae(row, eP) += wi * dp0;
            Ar(row, R(1)) += wi * dp1;
            Ar(row, R(2)) += wi * dp2;
            Ae(row, eM) -= wi * dm0;
            Ar(row, L(nl - 1)) -= wi * dm1;
            Ar(row, L(nl - 2)) -= wi * dm2;
        } else {  // weight * y(0+) + node * y1
            Ae(row, eP) += wi;
        }
        Ar(row, B1(i)) += lay.mu.nodes[i];
    }
    for (std::size_t j = 0; j < M; ++j) {
        Eigen::Index row = static_cast<Eigen::Index>(B2(j));
        const double wj = lay.nu.weights[j];
        if (lay.nu.reciprocal) {  // weight * (jump y) + node * y2
            Ae(row, eP) += wj;
            Ae(row, eM) -= wj;
        } else {  // weight * y'(0-) + node * y2
            Ae(row, eM) += wj * dm0;
            Ar(row, L(nl - 1)) += wj * dm1;
            Ar(row, L(nl - 2)) += wj * dm2;
        }
        Ar(row, B2(j)) += lay.nu.nodes[j];
    }

    DiscretizedOperator op;
    op.A = Ar + Ae * S;
    op.w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
    op.w.head(static_cast<Eigen::Index>(il)).setConstant(hl);
    op.w.segment(static_cast<Eigen::Index>(il), static_cast<Eigen::Index>(ir)).setConstant(hr);
    op.n_left = nl;
    op.n_right = nr;
    op.layout = lay;
    return op;
}

}  // namespace sltc
