// Standalone acceptance gate: one line per criterion, nonzero exit on any
// failure.  Tolerances are fixed; do not tune them to make a run pass.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"

using namespace sltc;

namespace {

int g_failures = 0;

void report(int k, const char* label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", k, label, detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// rejection-sampled spectral parameters, clear of every coupling pole
std::vector<Complex> sample_lambdas(const ProblemSpec& prob, std::size_t count, std::mt19937& rng,
                                    double lo = -6.0, double hi = 12.0) {
    std::uniform_real_distribution<double> U(lo, hi);
    std::vector<double> poles = prob.mu.poles();
    for (double d : prob.nu.poles()) poles.push_back(d);
    std::vector<Complex> out;
    std::size_t k = 0;
    while (out.size() < count) {
        double re = U(rng);
        ++k;
        bool clear = true;
        for (double p : poles)
            if (std::abs(re - p) < 0.05) clear = false;
        if (!clear) continue;
        out.emplace_back(re, (k % 3 == 0) ? 0.7 : 0.0);
    }
    return out;
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    ScanOptions opt;
    opt.window_lo = 0.0;
    opt.window_hi = 25.3;  // n^2/4 for n = 1..10, eleventh at 30.25
    ScanResult res = find_spectrum(testcfg::continuous(), opt);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double worst = 1e300;
    bool pass = res.eigenvalues.size() == 10;
    if (pass) {
        worst = 0.0;
        for (std::size_t n = 1; n <= 10; ++n)
            worst = std::max(worst,
                             std::abs(res.eigenvalues[n - 1].lambda - 0.25 * double(n * n)));
        pass = worst <= 1e-8 && secs < 5.0;
    }
    report(1, "shooting scan recovers the first ten classical eigenvalues", pass,
           "worst dev " + fmt(worst) + " vs 1e-8, " + fmt(secs) + " s vs 5 s");
}

void criterion_2() {
    std::mt19937 rng(11);
    double worst = 0.0;
    for (const ProblemSpec& prob :
         {testcfg::double_eigenvalue(), testcfg::herglotz_full(), testcfg::sampled_well()}) {
        for (Complex lam : sample_lambdas(prob, 1000, rng))
            worst = std::max(worst, std::abs(transfer_matrix(prob, lam).det() - 1.0));
    }
    report(2, "transfer matrix is unimodular across three configurations", worst <= 1e-13,
           "worst |det - 1| " + fmt(worst) + " vs 1e-13, 1000 samples each");
}

void criterion_3() {
    ProblemSpec prob = testcfg::sampled_well();
    const Complex lam(1.7, 0.0);
    InterfaceStates st = interface_states(prob, lam);
    double side = std::abs(st.psi_minus - st.psi_plus) / std::abs(st.psi_minus);

    auto variation = [&](double a, double b, const OdeState& ustart, const OdeState& vstart,
                         Complex ref) {
        std::vector<double> xs(20);
        for (int k = 0; k < 20; ++k) xs[k] = a + (b - a) * (k + 0.5) / 20.0;
        std::vector<OdeState> ur, vr;
        integrate_schrodinger(prob.q, lam, a, b, ustart, xs, &ur);
        std::vector<double> xs_desc(xs.rbegin(), xs.rend());
        integrate_schrodinger(prob.q, lam, b, a, vstart, xs_desc, &vr);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const OdeState& v = vr[19 - k];
            Complex W = ur[k].y * v.yp - ur[k].yp * v.y;
            worst = std::max(worst, std::abs(W - ref) / std::abs(ref));
        }
        return worst;
    };
    double right = variation(0.0, prob.b, {st.u_plus.value, st.u_plus.derivative},
                             {std::sin(prob.beta), std::cos(prob.beta)}, st.psi_plus);
    double left = variation(-prob.a, 0.0, {std::sin(prob.alpha), std::cos(prob.alpha)},
                            {st.v_minus.value, st.v_minus.derivative}, st.psi_minus);
    double worst = std::max(left, right);
    report(3, "characteristic function agrees across the interface, Wronskian constant",
           side <= 1e-8 && worst <= 1e-8,
           "side diff " + fmt(side) + ", W variation " + fmt(worst) + " vs 1e-8");
}

void criterion_4() {
    std::mt19937 rng(13);
    ProblemSpec prob = testcfg::closing_example();
    double worst = 0.0;
    for (Complex lam : sample_lambdas(prob, 100, rng, -5.0, 9.0)) {
        Complex psi = wronskian(prob, lam);
        Complex det = resolvent_determinant(prob, lam);
        worst = std::max(worst, std::abs(psi + det) / std::max(1.0, std::abs(psi)));
    }
    report(4, "interface-system determinant equals minus the characteristic function",
           worst <= 1e-10, "worst rel dev " + fmt(worst) + " vs 1e-10, 100 samples");
}

void criterion_5() {
    ProblemSpec prob = testcfg::double_eigenvalue();
    PoleClassification pc = classify_pole(prob, 1.0);
    bool classified = pc.is_eigenvalue && pc.multiplicity == 2 &&
                      std::abs(pc.left_characteristic) < 1e-7 &&
                      std::abs(pc.right_characteristic) < 1e-7;

    auto distances = [&](double h) {
        DiscretizedOperator fd = assemble_fd(prob, h);
        std::vector<double> evs = fd.eigenvalues_near(1.0, 6);
        std::vector<double> close;
        for (double e : evs)
            if (std::abs(e - 1.0) < 5e-3) close.push_back(std::abs(e - 1.0));
        return close;
    };
    std::vector<double> d4 = distances(M_PI / 400.0);
    std::vector<double> d8 = distances(M_PI / 800.0);
    bool twins = d4.size() == 2 && d8.size() == 2;
    double ratio = 0.0;
    if (twins) {
        ratio = std::max(d4[0], d4[1]) / std::max(d8[0], d8[1]);
        twins = ratio > 2.5 && ratio < 6.0;
    }
    report(5, "double eigenvalue: classifier multiplicity 2, twin discrete eigenvalues",
           classified && twins,
           "chars " + fmt(std::abs(pc.left_characteristic)) + "/" +
               fmt(std::abs(pc.right_characteristic)) + " vs 1e-7, halving ratio " + fmt(ratio) +
               " vs ~4");
}

void criterion_6() {
    ProblemSpec prob = testcfg::no_double_slice();
    ScanOptions opt;
    opt.window_lo = 0.0;
    opt.window_hi = 10.0;
    ScanResult res = find_spectrum(prob, opt);
    bool all_simple = !res.eigenvalues.empty();
    for (const EigenvalueRecord& r : res.eigenvalues) all_simple = all_simple && r.multiplicity == 1;

    PoleClassification mu_pole = classify_pole(prob, 2.25);
    PoleClassification nu_pole = classify_pole(prob, 1.0);
    double least =
        std::min({std::abs(mu_pole.left_characteristic), std::abs(mu_pole.right_characteristic),
                  std::abs(nu_pole.left_characteristic), std::abs(nu_pole.right_characteristic)});
    bool poles_clear = !mu_pole.is_eigenvalue && !nu_pole.is_eigenvalue && least > 1e-3;
    report(6, "reciprocal-pair slice has only simple eigenvalues", all_simple && poles_clear,
           std::to_string(res.eigenvalues.size()) + " records all simple, least characteristic " +
               fmt(least) + " vs 1e-3");
}

void criterion_7() {
    auto h = [](double x) { return Complex(std::cos(x), 0.0); };
    double worst_res = 0.0, worst_tc = 0.0;
    for (auto& [prob, lam] : {std::pair{testcfg::continuous(), Complex(0.37, 0.0)},
                              std::pair{testcfg::double_eigenvalue(), Complex(2.0, 0.0)}}) {
        GreensKernel G(prob, lam);
        GridFunction g = G.apply(h);
        double hnorm = GridFunction::from_callable(G.mesh(), h).l2_norm();
        worst_res = std::max(worst_res, testcfg::operator_residual(prob, lam, g, h) / hnorm);

        const Traces& t = g.traces;
        double scale = std::max({1.0, g.sup_norm(), std::abs(t.deriv_m), std::abs(t.deriv_p)});
        Complex mu = prob.mu.eval(lam), nu = prob.nu.eval(lam);
        worst_tc = std::max(worst_tc, std::abs(t.value_p * mu - t.jump_deriv()) / scale);
        worst_tc = std::max(worst_tc, std::abs(t.deriv_m * nu - t.jump_value()) / scale);
    }
    report(7, "kernel application inverts the differential expression",
           worst_res <= 1e-6 && worst_tc <= 1e-7,
           "L2 residual " + fmt(worst_res) + " vs 1e-6, trace residual " + fmt(worst_tc) +
               " vs 1e-7");
}

void criterion_8() {
    ProblemSpec prob = testcfg::double_eigenvalue();
    const double lam0 = 0.0;  // nu pole, not an eigenvalue
    GreensKernel G(prob, Complex(lam0, 0.0));
    bool at_pole = G.at_pole();

    bool cross_zero = true;
    for (auto [x, t] : {std::pair{-1.3, 0.8}, std::pair{-2.9, 2.2}, std::pair{-0.4, 3.0}}) {
        Complex a = greens_value_pole(prob, lam0, x, t);
        Complex b = greens_value_pole(prob, lam0, t, x);
        cross_zero = cross_zero && a.real() == 0.0 && a.imag() == 0.0 && b.real() == 0.0 &&
                     b.imag() == 0.0;
    }

    auto h = [](double x) { return Complex(std::cos(x), 0.0); };
    GridFunction g = G.apply(h);
    double hnorm = GridFunction::from_callable(G.mesh(), h).l2_norm();
    double res = testcfg::operator_residual(prob, Complex(lam0, 0.0), g, h) / hnorm;

    const Traces& t = g.traces;
    double scale = std::max({1.0, g.sup_norm(), std::abs(t.deriv_m), std::abs(t.deriv_p)});
    Complex mu0 = prob.mu.eval(Complex(lam0, 0.0));
    double tc = std::max(std::abs(t.deriv_m), std::abs(t.deriv_p - mu0 * t.value_p)) / scale;

    report(8, "pole-case kernel decouples the two segments",
           at_pole && cross_zero && res <= 1e-6 && tc <= 1e-7,
           std::string("cross blocks ") + (cross_zero ? "exactly zero" : "NONZERO") +
               ", L2 residual " + fmt(res) + " vs 1e-6, trace residual " + fmt(tc) + " vs 1e-7");
}

void criterion_9() {
    struct Regime {
        ProblemSpec prob;
        Complex lambda;
    };
    const double node = 1.0 + std::sqrt(2.0);
    std::vector<Regime> regimes = {
        {testcfg::herglotz_full(), Complex(0.37, 0.0)},   // generic real
        {testcfg::double_eigenvalue(), Complex(0.37, 0.0)},
        {testcfg::herglotz_full(), Complex(1.0, 1.0)},    // complex
        {testcfg::double_eigenvalue(), Complex(1.0, 1.0)},
        {testcfg::herglotz_full(), Complex(2.0, 0.0)},    // mu pole, not an eigenvalue
        {testcfg::no_double_slice(), Complex(2.25, 0.0)},
        {testcfg::herglotz_full(), Complex(node, 0.0)},   // reciprocal node
        {testcfg::closing_example(), Complex(-2.0, 0.0)},
        {testcfg::closing_example(), Complex(0.5, 0.0)},  // degenerate pole point
    };
    std::mt19937 rng(17);
    double worst = 0.0;
    for (const Regime& reg : regimes) {
        ResolventOperator R(reg.prob, reg.lambda);
        BlockLayout lay = make_layout(reg.prob);
        for (int t = 0; t < 20; ++t) {
            BlockVector H;
            H.fn = GridFunction::from_callable(R.mesh(), testcfg::random_trig(rng));
            H.v1 = testcfg::random_block(rng, lay.dim_mu());
            H.v2 = testcfg::random_block(rng, lay.dim_nu());

            BlockVector F = R.apply(H);
            BlockVector LF = apply_L(reg.prob, F);
            BlockVector D = LF;
            for (std::size_t k = 0; k < D.fn.left.size(); ++k)
                D.fn.left[k] = reg.lambda * F.fn.left[k] - LF.fn.left[k] - H.fn.left[k];
            for (std::size_t k = 0; k < D.fn.right.size(); ++k)
                D.fn.right[k] = reg.lambda * F.fn.right[k] - LF.fn.right[k] - H.fn.right[k];
            for (std::size_t i = 0; i < D.v1.size(); ++i)
                D.v1[i] = reg.lambda * F.v1[i] - LF.v1[i] - H.v1[i];
            for (std::size_t j = 0; j < D.v2.size(); ++j)
                D.v2[j] = reg.lambda * F.v2[j] - LF.v2[j] - H.v2[j];
            worst = std::max(worst, block_norm(D) / block_norm(H));
        }
    }

    ResolventOperator R(testcfg::closing_example(), Complex(0.5, 0.0));
    ResolventCoefficients co =
        R.coefficients({Complex(0.7, 0.0)}, {Complex(0.3, 0.0), Complex(-0.4, 0.0)});
    const double u0 = std::sqrt(2.0) * std::sin(M_PI / std::sqrt(2.0));
    double coeff_dev = std::max(std::abs(co.A - Complex((-0.7 - 0.4 * std::sqrt(5.0)) / u0, 0.0)),
                                std::abs(co.B - Complex(-0.7 / u0, 0.0)));

    report(9, "resolvent round trips in every pole regime, degenerate amplitudes exact",
           worst <= 1e-6 && coeff_dev <= 1e-9,
           "worst defect " + fmt(worst) + " vs 1e-6 over " +
               std::to_string(regimes.size() * 20) + " trips, amplitude dev " + fmt(coeff_dev) +
               " vs 1e-9");
}

void criterion_10() {
    std::mt19937 rng(19);
    double worst = 0.0;
    for (const ProblemSpec& prob : testcfg::all_configurations()) {
        MeshPair mesh = make_mesh(prob, 512);
        for (int t = 0; t < 10; ++t) {
            BlockVector F = make_admissible(prob, mesh, random_admissible_seed(rng));
            BlockVector G = make_admissible(prob, mesh, random_admissible_seed(rng));
            Complex d =
                hermitian_inner(apply_L(prob, F), G) - hermitian_inner(F, apply_L(prob, G));
            worst = std::max(worst, std::abs(d) / (block_norm(F) * block_norm(G)));
        }
    }

    double worst_im = 0.0;
    for (auto& [prob, h] : {std::pair{testcfg::double_eigenvalue(), M_PI / 300.0},
                            std::pair{testcfg::sampled_well(), M_PI / 100.0}}) {
        DiscretizedOperator fd = assemble_fd(prob, h);
        for (Complex z : fd.eigenvalues_complex()) worst_im = std::max(worst_im, std::abs(z.imag()));
    }
    report(10, "realization is symmetric and its discretization has a real spectrum",
           worst <= 1e-8 && worst_im <= 1e-10,
           "worst pairing defect " + fmt(worst) + " vs 1e-8, worst |Im| " + fmt(worst_im) +
               " vs 1e-10");
}

void criterion_11() {
    std::mt19937 rng(23);
    double worst_prod = 0.0, worst_sigma = 0.0;
    bool counts = true, positive = true;
    for (auto& [prob, pick_mu] : {std::pair{testcfg::herglotz_full(), true},
                                  std::pair{testcfg::sampled_well(), false}}) {
        const RationalCoupling& cp = pick_mu ? prob.mu : prob.nu;
        ReciprocalExpansion rec = cp.reciprocal();
        counts = counts && rec.poles.size() == cp.poles().size() + 1;
        for (double r2 : rec.residue_squares) positive = positive && r2 > 0.0;
        worst_sigma = std::max(worst_sigma, std::abs(rec.constant));
        for (Complex lam : sample_lambdas(prob, 200, rng)) {
            if (cp.pole_near(lam) || rec.pole_near(lam)) continue;
            bool clear = true;
            for (double z : rec.poles)
                if (std::abs(lam - z) < 0.05) clear = false;
            if (!clear) continue;
            worst_prod = std::max(worst_prod, std::abs(cp.eval(lam) * rec.eval(lam) - 1.0));
        }
    }

    double worst_note = 0.0;
    for (auto& [zeros, poles] : {std::pair<std::vector<double>, std::vector<double>>{
                                     {0.5, 2.0}, {1.0, 3.0}},   // zeros first
                                 {{1.0, 2.5}, {0.3, 1.7}}}) {   // poles first
        InterlacingFractions fr = from_interlacing(zeros, poles);
        std::uniform_real_distribution<double> U(-4.0, 6.0);
        for (int k = 0; k < 50; ++k) {
            Complex lam(U(rng), 0.4);
            Complex a = fr.eval_product(lam), b = fr.eval_partial_fraction(lam);
            worst_note = std::max(worst_note, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        RationalCoupling cp = fr.poles_first ? fr.to_nu_coupling() : fr.to_mu_coupling();
        std::vector<double> back = cp.real_zeros();
        if (back.size() != zeros.size()) {
            worst_note = 1.0;
        } else {
            for (std::size_t i = 0; i < zeros.size(); ++i)
                worst_note = std::max(worst_note, std::abs(back[i] - zeros[i]));
        }
    }

    report(11, "coupling reciprocals and interlacing data round-trip",
           worst_prod <= 1e-10 && counts && worst_sigma <= 1e-10 && positive &&
               worst_note <= 1e-12,
           "product dev " + fmt(worst_prod) + " vs 1e-10, |sigma| " + fmt(worst_sigma) +
               ", note round trip " + fmt(worst_note) + " vs 1e-12");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%d/11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
