#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"

using namespace sltc;
using Catch::Approx;

TEST_CASE("kernel values are symmetric in the two arguments") {
    ProblemSpec prob = testcfg::continuous();
    Complex lambda(0.37, 0.0);
    for (auto [x, t] : {std::pair{-2.1, 1.3}, {-0.5, -2.8}, {0.8, 2.9}, {-1.0, 0.0}}) {
        Complex a = greens_value(prob, lambda, x, t);
        Complex b = greens_value(prob, lambda, t, x);
        CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
    }

    ProblemSpec well = testcfg::sampled_well();
    Complex lw(3.3, 0.0);
    for (auto [x, t] : {std::pair{-2.0, 2.0}, {-1.4, -0.2}, {0.6, 2.4}}) {
        Complex a = greens_value(well, lw, x, t);
        Complex b = greens_value(well, lw, t, x);
        CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("kernel spot values match the free closed form") {
    // q = 0, trivial couplings: G(x,t) = u(min) v(max) / psi with
    // u = sin(rt (x+pi))/rt, v = sin(rt (pi-x))/rt, psi = -sin(2 pi rt)/rt
    ProblemSpec prob = testcfg::continuous();
    double L = 0.5, rt = std::sqrt(L);
    auto u = [&](double x) { return std::sin(rt * (x + M_PI)) / rt; };
    auto v = [&](double x) { return std::sin(rt * (M_PI - x)) / rt; };
    double psi = -std::sin(2.0 * M_PI * rt) / rt;

    Complex g = greens_value(prob, Complex(L), -M_PI / 2.0, M_PI / 2.0);
    CHECK(g.real() == Approx(u(-M_PI / 2.0) * v(M_PI / 2.0) / psi).epsilon(1e-9));
    CHECK(std::abs(g.imag()) < 1e-12);

    g = greens_value(prob, Complex(L), 1.9, 0.4);  // same side, swapped order
    CHECK(g.real() == Approx(u(0.4) * v(1.9) / psi).epsilon(1e-9));

    g = greens_value(prob, Complex(L), 0.0, 1.0);  // interface sits on the right side
    CHECK(g.real() == Approx(u(0.0) * v(1.0) / psi).epsilon(1e-9));
}

TEST_CASE("kernel construction is refused at an eigenvalue") {
    CHECK_THROWS_AS(greens_value(testcfg::continuous(), Complex(0.25), -1.0, 1.0),
                    EigenvalueLambda);
    CHECK_THROWS_AS(GreensKernel(testcfg::continuous(), Complex(2.25)), EigenvalueLambda);
    // both pole characteristics vanish at the double eigenvalue
    CHECK_THROWS_AS(GreensKernel(testcfg::double_eigenvalue(), Complex(1.0)), EigenvalueLambda);
}

TEST_CASE("applied kernel inverts lambda minus the differential expression") {
    auto h = [](double x) { return Complex(std::cos(x), 0.0); };

    for (auto [prob, L] : {std::pair{testcfg::continuous(), 0.37},
                           {testcfg::double_eigenvalue(), 2.0},
                           {testcfg::herglotz_full(), 0.6}}) {
        GreensKernel K(prob, Complex(L));
        GridFunction g = K.apply(h);

        double hnorm = std::sqrt(M_PI);  // L2 norm of cos on [-pi, pi]
        CHECK(testcfg::operator_residual(prob, Complex(L), g, h) < 1e-6 * hnorm);

        // boundary conditions at the outer ends
        Complex bca = g.left.front() * std::cos(prob.alpha) - g.dleft.front() * std::sin(prob.alpha);
        Complex bcb = g.right.back() * std::cos(prob.beta) - g.dright.back() * std::sin(prob.beta);
        CHECK(std::abs(bca) < 1e-9 * std::max(1.0, g.sup_norm()));
        CHECK(std::abs(bcb) < 1e-9 * std::max(1.0, g.sup_norm()));

        // transmission conditions from the algebraic traces
        const Traces& t = g.traces;
        double scale = std::max({1.0, std::abs(t.value_m), std::abs(t.deriv_m),
                                 std::abs(t.value_p), std::abs(t.deriv_p)});
        CHECK(std::abs(t.value_p * prob.mu.eval(Complex(L)) - t.jump_deriv()) < 1e-7 * scale);
        CHECK(std::abs(t.deriv_m * prob.nu.eval(Complex(L)) - t.jump_value()) < 1e-7 * scale);
    }
}

TEST_CASE("pole kernel decouples the two segments") {
    // double-eigenvalue configuration at the nu pole 0 (not an eigenvalue):
    // with h = 1 both one-sided solutions are polynomials
    ProblemSpec prob = testcfg::double_eigenvalue();

    SECTION("cross values vanish identically") {
        CHECK(greens_value_pole(prob, 0.0, -1.0, 1.0) == Complex(0.0, 0.0));
        CHECK(greens_value_pole(prob, 0.0, 2.4, -2.9) == Complex(0.0, 0.0));
    }

    SECTION("one-sided kernels match the hand-computed values") {
        CHECK(greens_value_pole(prob, 0.0, -M_PI / 2.0, -M_PI / 4.0).real() ==
              Approx(-M_PI / 2.0).epsilon(1e-9));
        CHECK(greens_value_pole(prob, 0.0, 0.5, 2.0).real() ==
              Approx(0.5 * (M_PI - 2.0) / (M_PI - 1.0)).epsilon(1e-9));
    }

    SECTION("applied pole kernel reproduces the polynomial solutions") {
        GreensKernel K(prob, Complex(0.0));
        REQUIRE(K.at_pole());
        CHECK(K.pole_classification().kind == PoleCase::PoleOfNu);
        GridFunction g = K.apply([](double) { return Complex(1.0, 0.0); });

        const MeshPair& m = g.mesh;
        for (std::size_t k = 0; k < g.left.size(); k += 97) {
            double x = m.left.node(k);
            CHECK(std::abs(g.left[k] - Complex((x * x - M_PI * M_PI) / 2.0)) < 1e-8);
        }
        for (std::size_t k = 0; k < g.right.size(); k += 97) {
            double x = m.right.node(k);
            double expect = (M_PI - x) * (M_PI + x - M_PI * x) / (2.0 * (M_PI - 1.0));
            CHECK(std::abs(g.right[k] - Complex(expect)) < 1e-8);
        }

        // decoupled trace conditions: y'(0-) = 0 and y'(0+) = mu(0) y(0+)
        CHECK(std::abs(g.traces.deriv_m) < 1e-9);
        Complex mu0 = prob.mu.eval(Complex(0.0));
        CHECK(std::abs(g.traces.deriv_p - mu0 * g.traces.value_p) <
              1e-8 * std::max(1.0, std::abs(g.traces.value_p)));
    }
}

TEST_CASE("mu-pole kernel pins the right trace and the left direction") {
    // no-double slice at the mu pole 9/4: nu(9/4) = 0, so the left segment
    // must carry g(0-) = 0 alongside g(0+) = 0 on the right
    ProblemSpec prob = testcfg::no_double_slice();
    GreensKernel K(prob, Complex(2.25));
    REQUIRE(K.at_pole());
    REQUIRE(K.pole_classification().kind == PoleCase::PoleOfMu);

    auto h = [](double x) { return Complex(std::cos(x), 0.0); };
    GridFunction g = K.apply(h);
    double scale = std::max(1.0, g.sup_norm());
    CHECK(std::abs(g.traces.value_p) < 1e-8 * scale);
    Complex nuv = prob.nu.eval(Complex(2.25));
    CHECK(std::abs(-g.traces.value_m - nuv * g.traces.deriv_m) < 1e-8 * scale);

    CHECK(testcfg::operator_residual(prob, Complex(2.25), g, h) < 1e-6 * std::sqrt(M_PI));
}

TEST_CASE("regular kernel approaches the pole kernel") {
    ProblemSpec prob = testcfg::double_eigenvalue();
    double eps = 1e-6;
    for (auto [x, t] : {std::pair{-2.0, -1.0}, {0.7, 2.2}}) {
        Complex limit = greens_value(prob, Complex(eps), x, t);
        Complex at = greens_value_pole(prob, 0.0, x, t);
        CHECK(std::abs(limit - at) < 1e-4 * std::max(1.0, std::abs(at)));
    }
    // cross values melt away with the coupling
    CHECK(std::abs(greens_value(prob, Complex(eps), -1.0, 1.0)) < 1e-4);
}

TEST_CASE("kernel refuses lambda inside a pole band for the regular path") {
    CHECK_THROWS_AS(greens_value(testcfg::double_eigenvalue(), Complex(1.0), -1.0, 1.0),
                    PoleEvaluation);
}
