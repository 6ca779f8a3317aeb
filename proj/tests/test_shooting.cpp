#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"

using namespace sltc;
using Catch::Approx;

namespace {

// q = 0 closed form: y at x with y(-a) = sin(alpha), y'(-a) = cos(alpha).
Complex free_solution(double alpha, double a, Complex lambda, double x) {
    Complex rt = std::sqrt(lambda);
    Complex arg = rt * (x + a);
    if (std::abs(rt) < 1e-14) return std::sin(alpha) + std::cos(alpha) * (x + a);
    return std::sin(alpha) * std::cos(arg) + std::cos(alpha) * std::sin(arg) / rt;
}

}  // namespace

TEST_CASE("left shot reproduces the free closed form") {
    ProblemSpec prob = testcfg::continuous();

    SECTION("lambda = 1/2") {
        ShotResult r = integrate_left(prob, Complex(0.5), 64);
        double rt = std::sqrt(0.5);
        CHECK(std::abs(r.end.value - std::sin(rt * M_PI) / rt) < 1e-10);
        CHECK(std::abs(r.end.derivative - std::cos(rt * M_PI)) < 1e-10);
        for (std::size_t k = 0; k < r.trajectory.x.size(); k += 7) {
            double x = r.trajectory.x[k];
            CHECK(std::abs(r.trajectory.y[k] - std::sin(rt * (x + M_PI)) / rt) < 1e-10);
        }
    }

    SECTION("lambda = 0 degenerates to a line") {
        ShotResult r = integrate_left(prob, Complex(0.0), 16);
        CHECK(std::abs(r.end.value - Complex(M_PI)) < 1e-10);
        CHECK(std::abs(r.end.derivative - Complex(1.0)) < 1e-12);
        CHECK(std::abs(r.trajectory.y[8] - Complex(-M_PI / 2.0 + M_PI)) < 1e-10);
    }

    SECTION("lambda = 1/4") {
        EndpointState e = integrate_left(prob, Complex(0.25)).end;
        CHECK(std::abs(e.value - Complex(2.0)) < 1e-10);
        CHECK(std::abs(e.derivative) < 1e-10);
    }
}

TEST_CASE("right shot reproduces the free closed form") {
    ProblemSpec prob = testcfg::continuous();

    SECTION("lambda = 0 gives v = pi - x") {
        ShotResult r = integrate_right(prob, Complex(0.0), 16);
        CHECK(std::abs(r.end.value - Complex(M_PI)) < 1e-10);
        CHECK(std::abs(r.end.derivative - Complex(-1.0)) < 1e-12);
        CHECK(r.trajectory.x.front() == Approx(0.0));
        CHECK(r.trajectory.x.back() == Approx(M_PI));
        CHECK(std::abs(r.trajectory.y[8] - Complex(M_PI / 2.0)) < 1e-10);
    }

    SECTION("lambda = 1/2 sine profile") {
        ShotResult r = integrate_right(prob, Complex(0.5), 32);
        double rt = std::sqrt(0.5);
        for (std::size_t k = 0; k < r.trajectory.x.size(); k += 5) {
            double x = r.trajectory.x[k];
            CHECK(std::abs(r.trajectory.y[k] - std::sin(rt * (M_PI - x)) / rt) < 1e-10);
            CHECK(std::abs(r.trajectory.yp[k] + std::cos(rt * (M_PI - x))) < 1e-10);
        }
    }
}

TEST_CASE("Robin start condition is honoured") {
    ProblemSpec prob;
    prob.alpha = M_PI / 4.0;
    Complex lambda(2.0, 0.0);
    ShotResult r = integrate_left(prob, lambda, 32);
    for (std::size_t k = 0; k < r.trajectory.x.size(); k += 4) {
        double x = r.trajectory.x[k];
        CHECK(std::abs(r.trajectory.y[k] - free_solution(prob.alpha, prob.a, lambda, x)) < 1e-10);
    }
    // the boundary condition itself: y cos(alpha) = y' sin(alpha) at -a
    Complex bc = r.trajectory.y.front() * std::cos(prob.alpha) -
                 r.trajectory.yp.front() * std::sin(prob.alpha);
    CHECK(std::abs(bc) < 1e-14);
}

TEST_CASE("recorded trajectories satisfy the equation") {
    for (Complex lambda : {Complex(2.0, 0.0), Complex(1.0, 1.0), Complex(-0.7, 0.0)}) {
        ProblemSpec prob = testcfg::continuous();
        ShotResult r = integrate_left(prob, lambda, 4096);
        double sup = 0.0;
        for (const Complex& y : r.trajectory.y) sup = std::max(sup, std::abs(y));
        CHECK(ode_residual(prob, lambda, r.trajectory) < 1e-6 * std::max(1.0, sup));
    }

    ProblemSpec well = testcfg::sampled_well();
    ShotResult r = integrate_left(well, Complex(3.3), 4096);
    double sup = 0.0;
    for (const Complex& y : r.trajectory.y) sup = std::max(sup, std::abs(y));
    CHECK(ode_residual(well, Complex(3.3), r.trajectory) < 1e-6 * std::max(1.0, sup));
}

TEST_CASE("finite-difference defect shrinks with the mesh") {
    ProblemSpec prob = testcfg::continuous();
    Complex lambda(2.0, 0.0);
    double coarse = ode_residual(prob, lambda, integrate_left(prob, lambda, 256).trajectory);
    double fine = ode_residual(prob, lambda, integrate_left(prob, lambda, 2048).trajectory);
    CHECK(fine * 20.0 < coarse);
}

TEST_CASE("potential kinds agree where they describe the same barrier") {
    ProblemSpec piecewise = testcfg::sampled_well();
    ProblemSpec closed = piecewise;
    closed.q = Potential::closed_form(
        [](double x) { return (x >= -1.0 && x < 1.0) ? 2.0 : 0.0; });

    // the closed form hides its jumps from the integrator, so agreement is
    // limited by adaptive stepping across the discontinuities
    Complex lambda(3.3, 0.0);
    EndpointState a = integrate_left(piecewise, lambda).end;
    EndpointState b = integrate_left(closed, lambda).end;
    CHECK(std::abs(a.value - b.value) < 1e-7);
    CHECK(std::abs(a.derivative - b.derivative) < 1e-7);
}

TEST_CASE("sampled potential interpolates a smooth profile") {
    ProblemSpec smooth = testcfg::continuous();
    smooth.q = Potential::closed_form([](double x) { return std::cos(x); });

    std::vector<double> grid, vals;
    for (int k = 0; k <= 8000; ++k) {
        double x = -M_PI + 2.0 * M_PI * k / 8000.0;
        grid.push_back(x);
        vals.push_back(std::cos(x));
    }
    ProblemSpec sampled = testcfg::continuous();
    sampled.q = Potential::sampled(grid, vals);

    // limited by the O(h^2) interpolation bias of the sample grid
    Complex lambda(1.7, 0.0);
    EndpointState a = integrate_left(smooth, lambda).end;
    EndpointState b = integrate_left(sampled, lambda).end;
    CHECK(std::abs(a.value - b.value) < 2e-6);
    CHECK(std::abs(a.derivative - b.derivative) < 2e-6);
}

TEST_CASE("step starvation raises IntegratorFailure") {
    ProblemSpec prob = testcfg::continuous();
    IvpOptions opt;
    opt.max_steps = 5;
    CHECK_THROWS_AS(integrate_left(prob, Complex(50.0), 0, opt), IntegratorFailure);
}

TEST_CASE("ode_residual rejects unusable trajectories") {
    ProblemSpec prob = testcfg::continuous();
    Trajectory t;
    t.x = {0.0, 1.0};
    t.y = {Complex(0.0), Complex(1.0)};
    t.yp = {Complex(1.0), Complex(1.0)};
    t.uniform = true;
    t.step = 1.0;
    CHECK_THROWS_AS(ode_residual(prob, Complex(1.0), t), std::invalid_argument);
}
