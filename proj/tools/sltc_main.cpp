// Command line front end: spectrum scans, kernel tables, resolvent solves,
// and a self-check over the model invariants.
//
// Exit codes: 0 success, 2 configuration/parse problems, 3 numerical failures.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sltc/sltc.hpp"

namespace fs = std::filesystem;
using namespace sltc;

namespace {

struct CommonArgs {
    std::string problem_file;
    std::string out_dir_flag;
    double mesh_h = 0.0;  // 0 = default mesh
};

std::string resolve_out_dir(const CommonArgs& args, const OutputConfig& out) {
    if (!args.out_dir_flag.empty()) return args.out_dir_flag;
    if (const char* env = std::getenv("SLTC_OUT_DIR"); env && *env) return env;
    return out.directory;
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    fs::path p = fs::path(dir) / name;
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot open output file " + p.string());
    return os;
}

GreensOptions greens_options(const CommonArgs& args, const ProblemSpec& prob) {
    GreensOptions opt;
    if (args.mesh_h > 0.0) {
        double span = std::max(prob.a, prob.b);
        std::size_t n = static_cast<std::size_t>(std::ceil(span / args.mesh_h));
        if (n % 2) ++n;
        opt.mesh_intervals_per_side = std::max<std::size_t>(n, 16);
    }
    return opt;
}

// per-side cell midpoints, so no sample sits on the interface
std::vector<double> midpoint_grid(double lo, double hi, std::size_t cells) {
    std::vector<double> xs(cells);
    double h = (hi - lo) / static_cast<double>(cells);
    for (std::size_t k = 0; k < cells; ++k) xs[k] = lo + (static_cast<double>(k) + 0.5) * h;
    return xs;
}

int run_spectrum(const CommonArgs& args, std::optional<std::pair<double, double>> window,
                 double grid_override, double tol_override, bool parallel) {
    ProblemConfig cfg = load_problem(args.problem_file);
    if (window) {
        cfg.scan.window_lo = window->first;
        cfg.scan.window_hi = window->second;
    }
    if (grid_override > 0.0) cfg.scan.grid_points_per_unit = grid_override;
    if (tol_override > 0.0) cfg.scan.refine_tol = tol_override;
    cfg.scan.parallel = parallel;

    ScanResult res = find_spectrum(cfg.prob, cfg.scan);
    std::string dir = resolve_out_dir(args, cfg.output);
    std::ofstream os = open_csv(dir, "spectrum.csv");
    write_spectrum_csv(os, res.eigenvalues, cfg.output.precision);

    std::cout << "window [" << cfg.scan.window_lo << ", " << cfg.scan.window_hi << "]: "
              << res.eigenvalues.size() << " eigenvalue(s)\n";
    for (const EigenvalueRecord& r : res.eigenvalues) {
        std::cout.precision(12);
        std::cout << "  " << r.lambda << "  mult " << r.multiplicity << "  "
                  << to_string(r.classification) << "\n";
    }
    for (const ScanWarning& w : res.warnings) std::cout << "warning: " << w.message << "\n";
    std::cout << "wrote " << (fs::path(dir) / "spectrum.csv").string() << "\n";
    return 0;
}

int run_greens(const CommonArgs& args, double lam_re, double lam_im, std::size_t points) {
    ProblemConfig cfg = load_problem(args.problem_file);
    const ProblemSpec& prob = cfg.prob;
    Complex lambda(lam_re, lam_im);
    GreensOptions gopt = greens_options(args, prob);

    std::vector<double> xl = midpoint_grid(-prob.a, 0.0, points);
    std::vector<double> xr = midpoint_grid(0.0, prob.b, points);
    std::vector<double> xs = xl;
    xs.insert(xs.end(), xr.begin(), xr.end());
    const std::size_t n = xs.size();
    std::vector<std::vector<Complex>> G(n, std::vector<Complex>(n));

    if (!prob.near_any_coupling_pole(lambda)) {
        InterfaceStates st = interface_states(prob, lambda, gopt.ivp);
        if (std::abs(st.psi()) < gopt.eigenvalue_tol * st.scale())
            throw EigenvalueLambda("kernel does not exist: lambda is an eigenvalue");

        std::vector<OdeState> rec;
        integrate_schrodinger(prob.q, lambda, -prob.a, 0.0,
                              {std::sin(prob.alpha), std::cos(prob.alpha)}, xl, &rec, gopt.ivp);
        std::vector<Complex> u(n), v(n);
        for (std::size_t k = 0; k < points; ++k) u[k] = rec[k].y;
        rec.clear();
        integrate_schrodinger(prob.q, lambda, 0.0, prob.b,
                              {st.u_plus.value, st.u_plus.derivative}, xr, &rec, gopt.ivp);
        for (std::size_t k = 0; k < points; ++k) u[points + k] = rec[k].y;
        rec.clear();
        std::vector<double> xr_desc(xr.rbegin(), xr.rend());
        integrate_schrodinger(prob.q, lambda, prob.b, 0.0,
                              {std::sin(prob.beta), std::cos(prob.beta)}, xr_desc, &rec, gopt.ivp);
        for (std::size_t k = 0; k < points; ++k) v[2 * points - 1 - k] = rec[k].y;
        rec.clear();
        std::vector<double> xl_desc(xl.rbegin(), xl.rend());
        integrate_schrodinger(prob.q, lambda, 0.0, -prob.a,
                              {st.v_minus.value, st.v_minus.derivative}, xl_desc, &rec, gopt.ivp);
        for (std::size_t k = 0; k < points; ++k) v[points - 1 - k] = rec[k].y;

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                G[i][j] = u[std::min(i, j)] * v[std::max(i, j)] / st.psi();
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                G[i][j] = greens_value_pole(prob, lam_re, xs[i], xs[j], gopt);
    }

    std::string dir = resolve_out_dir(args, cfg.output);
    std::ofstream os = open_csv(dir, "greens.csv");
    write_greens_csv(os, xs, xs, G, cfg.output.precision);
    std::cout << "wrote " << (fs::path(dir) / "greens.csv").string() << " (" << n << "x" << n
              << " samples)\n";
    return 0;
}

int run_resolvent(const CommonArgs& args, const std::string& rhs_file, double lam_re,
                  double lam_im) {
    ProblemConfig cfg = load_problem(args.problem_file);
    const ProblemSpec& prob = cfg.prob;
    RhsConfig rhs = load_rhs(rhs_file);
    Complex lambda(lam_re, lam_im);
    GreensOptions gopt = greens_options(args, prob);

    BlockLayout lay = make_layout(prob);
    if (!rhs.v1.empty() && rhs.v1.size() != lay.dim_mu())
        throw ConfigError(rhs_file + ": [h1] values: expected " + std::to_string(lay.dim_mu()) +
                          " entries for this problem, got " + std::to_string(rhs.v1.size()));
    if (!rhs.v2.empty() && rhs.v2.size() != lay.dim_nu())
        throw ConfigError(rhs_file + ": [h2] values: expected " + std::to_string(lay.dim_nu()) +
                          " entries for this problem, got " + std::to_string(rhs.v2.size()));

    ResolventOperator R(prob, lambda, gopt);
    const MeshPair& mesh = R.mesh();

    BlockVector H;
    H.fn.mesh = mesh;
    if (!rhs.h_zero) {
        auto interp = [&](double x) {
            const std::vector<double>& g = rhs.grid;
            if (x <= g.front()) return rhs.values.front();
            if (x >= g.back()) return rhs.values.back();
            auto it = std::upper_bound(g.begin(), g.end(), x);
            std::size_t j = static_cast<std::size_t>(it - g.begin());
            double t = (x - g[j - 1]) / (g[j] - g[j - 1]);
            return rhs.values[j - 1] + t * (rhs.values[j] - rhs.values[j - 1]);
        };
        H.fn.left.resize(mesh.left.nodes());
        H.fn.right.resize(mesh.right.nodes());
        for (std::size_t k = 0; k < H.fn.left.size(); ++k)
            H.fn.left[k] = interp(mesh.left.node(k));
        for (std::size_t k = 0; k < H.fn.right.size(); ++k)
            H.fn.right[k] = interp(mesh.right.node(k));
    }
    for (double x : rhs.v1) H.v1.emplace_back(x);
    for (double x : rhs.v2) H.v2.emplace_back(x);

    BlockVector F = R.apply(H);

    // round trip: (lambda - L) F should reproduce H
    double defect = 0.0;
    {
        BlockVector Hfull = BlockVector::zero(prob, mesh);
        if (!H.fn.left.empty()) Hfull.fn.left = H.fn.left;
        if (!H.fn.right.empty()) Hfull.fn.right = H.fn.right;
        if (!H.v1.empty()) Hfull.v1 = H.v1;
        if (!H.v2.empty()) Hfull.v2 = H.v2;

        BlockVector LF = apply_L(prob, F, 1e-4);
        BlockVector D = BlockVector::zero(prob, mesh);
        for (std::size_t k = 0; k < D.fn.left.size(); ++k)
            D.fn.left[k] = lambda * F.fn.left[k] - LF.fn.left[k] - Hfull.fn.left[k];
        for (std::size_t k = 0; k < D.fn.right.size(); ++k)
            D.fn.right[k] = lambda * F.fn.right[k] - LF.fn.right[k] - Hfull.fn.right[k];
        for (std::size_t i = 0; i < D.v1.size(); ++i)
            D.v1[i] = lambda * F.v1[i] - LF.v1[i] - Hfull.v1[i];
        for (std::size_t j = 0; j < D.v2.size(); ++j)
            D.v2[j] = lambda * F.v2[j] - LF.v2[j] - Hfull.v2[j];
        double hnorm = block_norm(Hfull);
        defect = block_norm(D);
        if (hnorm > 0.0) defect /= hnorm;
    }

    std::string dir = resolve_out_dir(args, cfg.output);
    {
        std::vector<double> xs;
        std::vector<Complex> fv;
        for (std::size_t k = 0; k < mesh.left.nodes(); ++k) {
            xs.push_back(mesh.left.node(k));
            fv.push_back(F.fn.left[k]);
        }
        for (std::size_t k = 0; k < mesh.right.nodes(); ++k) {
            xs.push_back(mesh.right.node(k));
            fv.push_back(F.fn.right[k]);
        }
        std::ofstream os = open_csv(dir, "resolvent.csv");
        write_function_csv(os, xs, fv, cfg.output.precision);
    }
    {
        std::ofstream os = open_csv(dir, "vectors.csv");
        write_blocks_csv(os, F.v1, F.v2, cfg.output.precision);
    }
    std::cout.precision(12);
    std::cout << "traces: f(0-) = " << F.fn.traces.value_m.real() << "  f(0+) = "
              << F.fn.traces.value_p.real() << "\n";
    std::cout << "round-trip defect |(lambda - L)F - H| / |H| = " << std::scientific << defect
              << std::defaultfloat << "\n";
    std::cout << "wrote " << (fs::path(dir) / "resolvent.csv").string() << " and "
              << (fs::path(dir) / "vectors.csv").string() << "\n";
    return 0;
}

struct CheckRow {
    std::string name;
    bool applicable = true;
    bool pass = false;
    double measure = 0.0;
    double threshold = 0.0;
};

int run_verify(const CommonArgs& args) {
    ProblemConfig cfg = load_problem(args.problem_file);
    const ProblemSpec& prob = cfg.prob;
    std::vector<CheckRow> rows;

    // sample points in the scan window, clear of coupling pole bands
    std::vector<double> samples;
    {
        double lo = cfg.scan.window_lo, hi = cfg.scan.window_hi;
        for (int k = 0; k < 25; ++k) {
            double l = lo + (hi - lo) * (k + 0.37) / 25.0;
            bool clear = true;
            for (double p : prob.mu.poles()) clear = clear && std::abs(l - p) > 1e-3;
            for (double p : prob.nu.poles()) clear = clear && std::abs(l - p) > 1e-3;
            if (clear) samples.push_back(l);
        }
    }

    {
        CheckRow r{"transfer matrix is unimodular", true, false, 0.0, 1e-11};
        for (double l : samples)
            r.measure = std::max(r.measure, std::abs(transfer_matrix(prob, Complex(l)).det() - 1.0));
        r.pass = r.measure < r.threshold;
        rows.push_back(r);
    }
    {
        CheckRow r{"characteristic agrees from both sides", true, false, 0.0, 1e-8};
        for (double l : samples) {
            InterfaceStates st = interface_states(prob, Complex(l));
            r.measure = std::max(r.measure,
                                 std::abs(st.psi_minus - st.psi_plus) / std::max(1.0, std::abs(st.psi_minus)));
        }
        r.pass = r.measure < r.threshold;
        rows.push_back(r);
    }
    {
        CheckRow r{"interface determinant equals -characteristic", true, false, 0.0, 1e-8};
        for (double l : samples) {
            Complex psi = wronskian(prob, Complex(l));
            Complex det = resolvent_determinant(prob, Complex(l));
            r.measure = std::max(r.measure, std::abs(psi + det) / std::max(1.0, std::abs(psi)));
        }
        r.pass = r.measure < r.threshold;
        rows.push_back(r);
    }
    {
        CheckRow r{"reciprocal coupling expansions round-trip", true, false, 0.0, 1e-8};
        r.applicable = prob.mu.slope() > 0.0 || prob.nu.slope() > 0.0;
        if (r.applicable) {
            for (const RationalCoupling* cp : {&prob.mu, &prob.nu}) {
                if (cp->slope() == 0.0) continue;
                ReciprocalExpansion rec = cp->reciprocal();
                for (double l : samples) {
                    bool clear = !cp->pole_near(Complex(l)) && !rec.pole_near(Complex(l));
                    if (!clear) continue;
                    Complex prod = cp->eval(Complex(l)) * rec.eval(Complex(l));
                    r.measure = std::max(r.measure, std::abs(prod - 1.0));
                }
            }
            r.pass = r.measure < r.threshold;
        }
        rows.push_back(r);
    }
    {
        CheckRow r{"realization is symmetric on admissible pairs", true, false, 0.0, 1e-8};
        MeshPair mesh = make_mesh(prob, 512);
        std::mt19937 rng(2026);
        for (int trial = 0; trial < 3; ++trial) {
            BlockVector F = make_admissible(prob, mesh, random_admissible_seed(rng));
            BlockVector G = make_admissible(prob, mesh, random_admissible_seed(rng));
            SymmetryDefect d = verify_symmetry(prob, F, G);
            r.measure = std::max(r.measure, d.defect / d.scale);
        }
        r.pass = r.measure < r.threshold;
        rows.push_back(r);
    }
    {
        CheckRow r{"dense discretization confirms the scan", true, false, 0.0, 1e-2};
        ScanOptions sc = cfg.scan;
        sc.window_hi = std::min(sc.window_hi, 12.0);
        ScanResult scan = find_spectrum(prob, sc);
        DiscretizedOperator fd = assemble_fd(prob, M_PI / 400.0);
        std::vector<double> dense = fd.eigenvalues();
        for (const EigenvalueRecord& e : scan.eigenvalues) {
            double best = 1e300;
            for (double d : dense) best = std::min(best, std::abs(d - e.lambda));
            r.measure = std::max(r.measure, best / std::max(1.0, std::abs(e.lambda)));
        }
        r.pass = r.measure < r.threshold;
        rows.push_back(r);
    }

    bool all = true;
    for (const CheckRow& r : rows) {
        if (!r.applicable) {
            std::cout << "[SKIP] " << r.name << " (not applicable)\n";
            continue;
        }
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  (measured ";
        std::cout.precision(3);
        std::cout << std::scientific << r.measure << ", threshold " << r.threshold << ")\n";
        std::cout.unsetf(std::ios::floatfield);
        all = all && r.pass;
    }
    if (!all) throw NumericalFailure("one or more invariant checks failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-segment Sturm-Liouville problems with rational interface couplings"};
    app.require_subcommand(1);

    CommonArgs args;
    std::vector<double> window_flag;
    double grid_flag = 0.0, tol_flag = 0.0;
    bool parallel = false;
    double lam_re = 0.0, lam_im = 0.0;
    std::size_t points = 16;
    std::string rhs_file;

    auto add_common = [&](CLI::App* sub, bool needs_mesh) {
        sub->add_option("problem", args.problem_file, "problem file (.slp)")->required();
        sub->add_option("--out-dir", args.out_dir_flag,
                        "output directory (overrides SLTC_OUT_DIR and the problem file)");
        if (needs_mesh)
            sub->add_option("--mesh-h", args.mesh_h, "target mesh step for kernel quadrature");
    };

    CLI::App* spec = app.add_subcommand("spectrum", "scan a window for eigenvalues");
    add_common(spec, false);
    spec->add_option("--window", window_flag, "scan window lo hi")->expected(2);
    spec->add_option("--grid", grid_flag, "samples per unit of the scan grid");
    spec->add_option("--tol", tol_flag, "root refinement tolerance");
    spec->add_flag("--parallel", parallel, "evaluate the scan grid on multiple threads");

    CLI::App* gre = app.add_subcommand("greens", "tabulate the kernel on a midpoint grid");
    add_common(gre, true);
    gre->add_option("--lambda", lam_re, "spectral parameter (real part)")->required();
    gre->add_option("--lambda-im", lam_im, "spectral parameter (imaginary part)");
    gre->add_option("--points", points, "midpoint samples per segment");

    CLI::App* res = app.add_subcommand("resolvent", "solve (lambda - L) F = H for given data");
    add_common(res, true);
    res->add_option("--rhs", rhs_file, "right-hand-side file (.rhs)")->required();
    res->add_option("--lambda", lam_re, "spectral parameter (real part)")->required();
    res->add_option("--lambda-im", lam_im, "spectral parameter (imaginary part)");

    CLI::App* ver = app.add_subcommand("verify", "run the model invariant self-checks");
    add_common(ver, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spec->parsed()) {
            std::optional<std::pair<double, double>> win;
            if (window_flag.size() == 2) {
                if (!(window_flag[0] < window_flag[1]))
                    throw ConfigError("--window: expected lo < hi");
                win = {window_flag[0], window_flag[1]};
            }
            return run_spectrum(args, win, grid_flag, tol_flag, parallel);
        }
        if (gre->parsed()) return run_greens(args, lam_re, lam_im, points);
        if (res->parsed()) return run_resolvent(args, rhs_file, lam_re, lam_im);
        if (ver->parsed()) return run_verify(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
