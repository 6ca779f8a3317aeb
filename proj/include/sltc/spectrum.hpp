#pragma once

// Eigenvalue location over a real window (lo, hi].
//
// Off the coupling poles the eigenvalues are the real zeros of the Wronskian
// psi, located by sign-change bracketing on a uniform grid and polished by
// Brent refinement.  Coupling poles are excluded from the grid by a small
// radius and handled separately through the pole characteristics, which also
// decide multiplicity there.  Tangential near-zeros of psi (no sign change)
// cannot be certified by bracketing, so they are surfaced as warnings rather
// than records.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sltc/roots.hpp"
#include "sltc/transmission.hpp"

namespace sltc {

struct ScanOptions {
    double window_lo = 0.0;
    double window_hi = 10.0;
    int grid_points_per_unit = 40;
    double refine_tol = 1e-10;
    double pole_exclusion_radius = 1e-4;
    bool parallel = false;
    IvpOptions ivp;
};

enum class EigenvalueClass { Regular, PoleOfMu, PoleOfNu, PoleOfBoth };

inline const char* to_string(EigenvalueClass c) {
    switch (c) {
        case EigenvalueClass::Regular: return "RegularSimple";
        case EigenvalueClass::PoleOfMu: return "CaseI_PoleOfMu";
        case EigenvalueClass::PoleOfNu: return "CaseII_PoleOfNu";
        case EigenvalueClass::PoleOfBoth: return "CaseIII_PoleOfBoth";
    }
    return "?";
}

inline EigenvalueClass to_eigenvalue_class(PoleCase c) {
    switch (c) {
        case PoleCase::PoleOfMu: return EigenvalueClass::PoleOfMu;
        case PoleCase::PoleOfNu: return EigenvalueClass::PoleOfNu;
        case PoleCase::PoleOfBoth: return EigenvalueClass::PoleOfBoth;
    }
    return EigenvalueClass::Regular;
}

struct EigenvalueRecord {
    double lambda = 0.0;
    int multiplicity = 1;
    EigenvalueClass classification = EigenvalueClass::Regular;
    double residual = 0.0;  // |psi| at the root, or the largest vanishing pole characteristic
    double bracket_lo = 0.0, bracket_hi = 0.0;
};

struct ScanWarning {
    enum class Kind { SuspectedDoubleRoot, AmbiguousPoleBand };
    Kind kind = Kind::SuspectedDoubleRoot;
    double lambda = 0.0;
    std::string message;
};

struct ScanResult {
    std::vector<EigenvalueRecord> eigenvalues;
    std::vector<ScanWarning> warnings;
};

namespace detail {

inline std::vector<double> coupling_poles_in(const ProblemSpec& prob, double lo, double hi) {
    std::set<double> ps;
    for (double p : prob.mu.poles())
        if (p > lo && p <= hi) ps.insert(p);
    for (double p : prob.nu.poles())
        if (p > lo && p <= hi) ps.insert(p);
    return {ps.begin(), ps.end()};
}

inline void eval_psi_grid(const ProblemSpec& prob, const std::vector<double>& xs,
                          std::vector<double>& psis, const ScanOptions& opt) {
    psis.assign(xs.size(), 0.0);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            psis[i] = wronskian(prob, Complex(xs[i]), opt.ivp).real();
    };
    if (!opt.parallel || xs.size() < 16) {
        worker(0, xs.size());
        return;
    }
    unsigned n_threads = std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    std::size_t chunk = (xs.size() + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
        std::size_t begin = t * chunk, end = std::min(xs.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Sign-change scan between the coupling poles.  Every record has class
// Regular and multiplicity one; tangential near-zeros become warnings.
inline ScanResult scan_regular(const ProblemSpec& prob, const ScanOptions& opt) {
    ScanResult result;
    const double lo = opt.window_lo, hi = opt.window_hi;
    if (!(hi > lo)) return result;

    std::vector<double> poles = detail::coupling_poles_in(prob, lo - opt.pole_exclusion_radius,
                                                          hi + opt.pole_exclusion_radius);
    std::vector<std::pair<double, double>> segments;
    double cursor = lo;
    for (double p : poles) {
        if (p - opt.pole_exclusion_radius > cursor)
            segments.emplace_back(cursor, p - opt.pole_exclusion_radius);
        cursor = std::max(cursor, p + opt.pole_exclusion_radius);
    }
    if (hi > cursor) segments.emplace_back(cursor, hi);

    auto psi_at = [&](double x) { return wronskian(prob, Complex(x), opt.ivp).real(); };

    for (auto [s, e] : segments) {
        std::size_t n =
            std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil((e - s) * opt.grid_points_per_unit)) + 1);
        std::vector<double> xs(n);
        double step = (e - s) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) xs[i] = s + step * static_cast<double>(i);
        xs.back() = e;

        std::vector<double> psis;
        detail::eval_psi_grid(prob, xs, psis, opt);

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (psis[i] == 0.0 && i > 0) continue;  // root sits on a grid node: handled as left endpoint once
            bool change = (psis[i] < 0.0 && psis[i + 1] >= 0.0) || (psis[i] > 0.0 && psis[i + 1] <= 0.0);
            if (change) {
                RootResult r = brent_root(psi_at, xs[i], xs[i + 1], opt.refine_tol);
                if (r.x > lo && r.x <= hi) {
                    EigenvalueRecord rec;
                    rec.lambda = r.x;
                    rec.multiplicity = 1;
                    rec.classification = EigenvalueClass::Regular;
                    rec.residual = std::abs(r.f);
                    rec.bracket_lo = r.bracket_lo;
                    rec.bracket_hi = r.bracket_hi;
                    result.eigenvalues.push_back(rec);
                }
            } else if (i > 0) {
                // interior local minimum of |psi| with no sign change on either side
                bool same_sign = psis[i - 1] != 0.0 && psis[i] != 0.0 && psis[i + 1] != 0.0 &&
                                 (psis[i - 1] > 0.0) == (psis[i] > 0.0) &&
                                 (psis[i] > 0.0) == (psis[i + 1] > 0.0);
                bool local_min = same_sign && std::abs(psis[i]) < std::abs(psis[i - 1]) &&
                                 std::abs(psis[i]) <= std::abs(psis[i + 1]);
                if (local_min) {
                    double scale = std::max({1.0, std::abs(psis[i - 1]), std::abs(psis[i + 1])});
                    RootResult m = golden_min_abs(psi_at, xs[i - 1], xs[i + 1]);
                    if (std::abs(m.f) < 1e-9 * scale) {
                        ScanWarning w;
                        w.kind = ScanWarning::Kind::SuspectedDoubleRoot;
                        w.lambda = m.x;
                        w.message = "tangential near-zero of the characteristic function near lambda=" +
                                    std::to_string(m.x) + "; bracketing cannot certify it";
                        result.warnings.push_back(w);
                    }
                }
            }
        }
    }
    return result;
}

// Pole-characteristic pass over every coupling pole inside the window.
inline ScanResult scan_poles(const ProblemSpec& prob, const ScanOptions& opt) {
    ScanResult result;
    for (double p : detail::coupling_poles_in(prob, opt.window_lo, opt.window_hi)) {
        PoleClassification pc = classify_pole(prob, p, opt.ivp);
        if (pc.ambiguous) {
            ScanWarning w;
            w.kind = ScanWarning::Kind::AmbiguousPoleBand;
            w.lambda = p;
            w.message = "distinct coupling poles share the proximity band at lambda=" +
                        std::to_string(p) + "; classification uses the nearest pole";
            result.warnings.push_back(w);
        }
        if (!pc.is_eigenvalue) continue;
        EigenvalueRecord rec;
        rec.lambda = p;
        rec.multiplicity = pc.multiplicity;
        rec.classification = to_eigenvalue_class(pc.kind);
        double res = 0.0;
        if (pc.left_vanishes) res = std::max(res, std::abs(pc.left_characteristic));
        if (pc.right_vanishes) res = std::max(res, std::abs(pc.right_characteristic));
        rec.residual = res;
        rec.bracket_lo = p - opt.pole_exclusion_radius;
        rec.bracket_hi = p + opt.pole_exclusion_radius;
        result.eigenvalues.push_back(rec);
    }
    return result;
}

// Full pass: regular scan plus pole classification, merged in ascending order.
inline ScanResult find_spectrum(const ProblemSpec& prob, const ScanOptions& opt) {
    ScanResult merged = scan_regular(prob, opt);
    ScanResult poles = scan_poles(prob, opt);
    merged.eigenvalues.insert(merged.eigenvalues.end(), poles.eigenvalues.begin(),
                              poles.eigenvalues.end());
    merged.warnings.insert(merged.warnings.end(), poles.warnings.begin(), poles.warnings.end());
    std::sort(merged.eigenvalues.begin(), merged.eigenvalues.end(),
              [](const EigenvalueRecord& x, const EigenvalueRecord& y) { return x.lambda < y.lambda; });
    // collapse duplicates from roots landing exactly on segment seams
    std::vector<EigenvalueRecord> dedup;
    for (const EigenvalueRecord& r : merged.eigenvalues) {
        if (!dedup.empty() && r.classification == EigenvalueClass::Regular &&
            dedup.back().classification == EigenvalueClass::Regular &&
            std::abs(r.lambda - dedup.back().lambda) < 1e-11 * std::max(1.0, std::abs(r.lambda))) {
            if (r.residual < dedup.back().residual) dedup.back() = r;
            continue;
        }
        dedup.push_back(r);
    }
    merged.eigenvalues = std::move(dedup);
    return merged;
}

}  // namespace sltc
