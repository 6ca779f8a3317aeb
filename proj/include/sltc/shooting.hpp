#pragma once

// Shooting solutions from both ends of the two-segment interval.
//
//   u: starts at -a with (y, y') = (sin alpha, cos alpha), integrated up to 0-
//   v: starts at  b with (y, y') = (sin beta,  cos beta),  integrated down to 0+
//
// Each satisfies its boundary condition by construction and, for fixed x,
// depends entirely on lambda; both are recorded on a uniform per-side mesh
// when a node count is requested.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sltc/ode.hpp"
#include "sltc/problem.hpp"

namespace sltc {

struct EndpointState {
    double x = 0.0;
    Complex value{0.0, 0.0};
    Complex derivative{0.0, 0.0};
};

struct Trajectory {
    std::vector<double> x;       // ascending
    std::vector<Complex> y, yp;  // values and first derivatives at x
    bool uniform = false;
    double step = 0.0;
};

inline std::vector<double> uniform_nodes(double lo, double hi, std::size_t intervals) {
    std::vector<double> x(intervals + 1);
    double h = (hi - lo) / static_cast<double>(intervals);
    for (std::size_t k = 0; k <= intervals; ++k) x[k] = lo + h * static_cast<double>(k);
    x.back() = hi;
    return x;
}

struct ShotResult {
    EndpointState end;     // state at the inner endpoint (0- for u, 0+ for v)
    Trajectory trajectory; // populated when mesh_intervals > 0
};

// u on [-a, 0): boundary condition at -a built in.
inline ShotResult integrate_left(const ProblemSpec& prob, Complex lambda,
                                 std::size_t mesh_intervals = 0, const IvpOptions& opt = {}) {
    OdeState s{std::sin(prob.alpha), std::cos(prob.alpha)};
    ShotResult res;
    if (mesh_intervals == 0) {
        OdeState e = integrate_schrodinger(prob.q, lambda, -prob.a, 0.0, s, {}, nullptr, opt);
        res.end = {0.0, e.y, e.yp};
        return res;
    }
    std::vector<double> nodes = uniform_nodes(-prob.a, 0.0, mesh_intervals);
    std::vector<OdeState> states;
    states.reserve(nodes.size());
    integrate_schrodinger(prob.q, lambda, -prob.a, 0.0, s, nodes, &states, opt);
    res.trajectory.x = std::move(nodes);
    res.trajectory.uniform = true;
    res.trajectory.step = prob.a / static_cast<double>(mesh_intervals);
    for (const OdeState& st : states) {
        res.trajectory.y.push_back(st.y);
        res.trajectory.yp.push_back(st.yp);
    }
    res.end = {0.0, res.trajectory.y.back(), res.trajectory.yp.back()};
    return res;
}

// v on (0, b]: boundary condition at b built in; integration runs downhill,
// the stored trajectory is ascending in x.
inline ShotResult integrate_right(const ProblemSpec& prob, Complex lambda,
                                  std::size_t mesh_intervals = 0, const IvpOptions& opt = {}) {
    OdeState s{std::sin(prob.beta), std::cos(prob.beta)};
    ShotResult res;
    if (mesh_intervals == 0) {
        OdeState e = integrate_schrodinger(prob.q, lambda, prob.b, 0.0, s, {}, nullptr, opt);
        res.end = {0.0, e.y, e.yp};
        return res;
    }
    std::vector<double> nodes = uniform_nodes(0.0, prob.b, mesh_intervals);
    std::vector<double> downhill(nodes.rbegin(), nodes.rend());
    std::vector<OdeState> states;
    states.reserve(nodes.size());
    integrate_schrodinger(prob.q, lambda, prob.b, 0.0, s, downhill, &states, opt);
    res.trajectory.x = std::move(nodes);
    res.trajectory.uniform = true;
    res.trajectory.step = prob.b / static_cast<double>(mesh_intervals);
    res.trajectory.y.assign(states.size(), Complex{});
    res.trajectory.yp.assign(states.size(), Complex{});
    for (std::size_t k = 0; k < states.size(); ++k) {
        res.trajectory.y[states.size() - 1 - k] = states[k].y;
        res.trajectory.yp[states.size() - 1 - k] = states[k].yp;
    }
    res.end = {0.0, res.trajectory.y.front(), res.trajectory.yp.front()};
    return res;
}

// Max-norm defect of a recorded trajectory against y'' = (q - lambda) y, using
// centred second differences on the uniform mesh.  Nodes whose stencil spans a
// breakpoint of q are skipped.
inline double ode_residual(const ProblemSpec& prob, Complex lambda, const Trajectory& traj) {
    if (!traj.uniform || traj.x.size() < 3)
        throw std::invalid_argument("ode_residual needs a uniform trajectory with >= 3 nodes");
    const double h = traj.step;
    std::vector<double> breaks = prob.q.interior_breakpoints(traj.x.front(), traj.x.back());
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.x.size(); ++k) {
        bool tainted = false;
        for (double bp : breaks)
            if (bp > traj.x[k - 1] && bp < traj.x[k + 1]) tainted = true;
        if (tainted) continue;
        Complex d2 = (traj.y[k - 1] - 2.0 * traj.y[k] + traj.y[k + 1]) / (h * h);
        Complex defect = d2 - (prob.q(traj.x[k]) - lambda) * traj.y[k];
        worst = std::max(worst, std::abs(defect));
    }
    return worst;
}

}  // namespace sltc
