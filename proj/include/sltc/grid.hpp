#pragma once

// Uniform per-side meshes and the quadrature used on them.  Each side of the
// interface carries its own grid with 0 as an explicit endpoint node, so no
// quadrature interval ever straddles the jump.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sltc/problem.hpp"

namespace sltc {

struct SideGrid {
    double lo = 0.0, hi = 0.0;
    std::size_t intervals = 0;

    double step() const { return (hi - lo) / static_cast<double>(intervals); }
    std::size_t nodes() const { return intervals + 1; }
    double node(std::size_t k) const {
        return (k == intervals) ? hi : lo + step() * static_cast<double>(k);
    }
    std::vector<double> node_list() const {
        std::vector<double> x(nodes());
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = node(k);
        return x;
    }
};

struct MeshPair {
    SideGrid left, right;
};

// Even interval counts keep composite Simpson exact-to-form on each side.
inline MeshPair make_mesh(const ProblemSpec& prob, std::size_t intervals_per_side) {
    if (intervals_per_side < 4 || intervals_per_side % 2 != 0)
        throw std::invalid_argument("mesh needs an even interval count >= 4 per side");
    return {{-prob.a, 0.0, intervals_per_side}, {0.0, prob.b, intervals_per_side}};
}

// ── composite Simpson ────────────────────────────────────────────────────────

// Integral over the whole side.
inline Complex simpson_total(const std::vector<Complex>& f, double h) {
    if (f.size() < 3 || f.size() % 2 == 0)
        throw std::invalid_argument("simpson_total needs an odd node count (even intervals)");
    Complex acc = f.front() + f.back();
    for (std::size_t k = 1; k + 1 < f.size(); ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    return acc * (h / 3.0);
}

// Running integral from the first node to every node.  Each interval adds the
// integral of the cubic through its four nearest nodes, so the accumulated
// error is fourth order and drifts smoothly in the node index.  A rule whose
// error constant alternated with node parity would survive the h^-2 of any
// difference stencil applied to the result.
inline std::vector<Complex> cumulative_integral(const std::vector<Complex>& f, double h) {
    if (f.size() < 4)
        throw std::invalid_argument("cumulative_integral needs at least 4 nodes");
    const std::size_t n = f.size();
    std::vector<Complex> I(n);
    I[0] = 0.0;
    I[1] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    for (std::size_t k = 1; k + 2 < n; ++k)
        I[k + 1] = I[k] + (h / 24.0) * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
    I[n - 1] = I[n - 2] + (h / 24.0) * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    return I;
}

// ── grid functions ───────────────────────────────────────────────────────────

// One-sided traces at the interface.
struct Traces {
    Complex value_m{0.0}, deriv_m{0.0};  // at 0-
    Complex value_p{0.0}, deriv_p{0.0};  // at 0+
    bool set = false;

    Complex jump_value() const { return value_p - value_m; }  // y(0+) - y(0-)
    Complex jump_deriv() const { return deriv_p - deriv_m; }  // y'(0+) - y'(0-)
};

// Function data on a MeshPair.  Values are mandatory; derivative and stored
// (-f'' + q f) arrays are carried when the construction knows them.
struct GridFunction {
    MeshPair mesh;
    std::vector<Complex> left, right;    // values, size nodes() per side
    std::vector<Complex> dleft, dright;  // optional first derivatives
    std::vector<Complex> lleft, lright;  // optional stored differential expression
    Traces traces;

    bool empty() const { return left.empty() && right.empty(); }
    bool has_derivatives() const { return !dleft.empty() && !dright.empty(); }
    bool has_stored_ell() const { return !lleft.empty() && !lright.empty(); }

    static GridFunction zero(const MeshPair& mesh) {
        GridFunction f;
        f.mesh = mesh;
        f.left.assign(mesh.left.nodes(), Complex{});
        f.right.assign(mesh.right.nodes(), Complex{});
        f.traces.set = true;
        return f;
    }

    template <class F>
    static GridFunction from_callable(const MeshPair& mesh, F&& fn) {
        GridFunction f;
        f.mesh = mesh;
        f.left.resize(mesh.left.nodes());
        f.right.resize(mesh.right.nodes());
        for (std::size_t k = 0; k < f.left.size(); ++k) f.left[k] = fn(mesh.left.node(k));
        for (std::size_t k = 0; k < f.right.size(); ++k) f.right[k] = fn(mesh.right.node(k));
        f.traces.value_m = f.left.back();
        f.traces.value_p = f.right.front();
        f.traces.set = true;  // derivative traces unknown (zero) unless the caller sets them
        return f;
    }

    // L2 part of the Hermitian inner product (f, g) = integral f conj(g).
    static Complex l2_inner(const GridFunction& f, const GridFunction& g) {
        if (f.left.size() != g.left.size() || f.right.size() != g.right.size())
            throw std::invalid_argument("l2_inner: mesh mismatch");
        std::vector<Complex> prod(f.left.size());
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = f.left[k] * std::conj(g.left[k]);
        Complex acc = simpson_total(prod, f.mesh.left.step());
        prod.resize(f.right.size());
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = f.right[k] * std::conj(g.right[k]);
        acc += simpson_total(prod, f.mesh.right.step());
        return acc;
    }

    double l2_norm() const { return std::sqrt(std::abs(l2_inner(*this, *this))); }

    double sup_norm() const {
        double m = 0.0;
        for (const Complex& v : left) m = std::max(m, std::abs(v));
        for (const Complex& v : right) m = std::max(m, std::abs(v));
        return m;
    }
};

}  // namespace sltc
