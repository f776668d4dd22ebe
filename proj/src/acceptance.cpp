#include "orbzeta/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "orbzeta/dims.hpp"

namespace orbzeta {

namespace {

struct Checker {
    CriterionResult result;
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            result.passed = false;
            result.notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& what) { result.notes.push_back(what); }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double rel(Cx got, Cx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

double bin_max_slope(const std::vector<double>& eps, const std::vector<double>& defect) {
    std::vector<double> lx, ly;
    size_t i = 0;
    while (i < eps.size()) {
        const double lo = eps[i];
        const double hi = lo * std::pow(10.0, 0.25);
        double mx = 0.0;
        size_t j = i;
        while (j < eps.size() && eps[j] < hi) {
            mx = std::max(mx, defect[j]);
            ++j;
        }
        if (mx > 0.0) {
            lx.push_back(std::log(std::sqrt(lo * std::min(hi, eps.back()))));
            ly.push_back(std::log(mx));
        }
        i = std::max(j, i + 1);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t r = 0; r < lx.size(); ++r) {
        sx += lx[r];
        sy += ly[r];
        sxx += lx[r] * lx[r];
        sxy += lx[r] * ly[r];
    }
    const double n = static_cast<double>(lx.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion_1(Checker& c) {
    for (double x0 : {0.3, 0.5, 0.7}) {
        const MeromorphicFn zf = induced_distance_zeta(extend_k1(x0, 6), -1.0 / x0);
        const auto r_half = residue_contour(zf, Cx(0.5), 1);
        c.expect(std::abs(r_half[0] - Cx(std::sqrt(2.0))) < 1e-8,
                 "residue at 1/2 for x0=" + fmt(x0) + ": got " + fmt(r_half[0].real()));
        const auto r_zero = residue_contour(zf, Cx(0.0), 1);
        const double quoted = 1.0 - 2.0 / x0;
        const bool ok = std::abs(r_zero[0] - Cx(quoted)) < 1e-8;
        c.expect(ok, "residue at 0 for x0=" + fmt(x0) + ": quoted value " + fmt(quoted) +
                         ", measured " + fmt(r_zero[0].real()) +
                         " (= -2/x0; the quoted 1-2/x0 omits the finite m=1 zero-pole "
                         "contribution of the binomial-Hurwitz expansion; the tube "
                         "expansion and the reconstruction checks encode -2/x0)");
    }
}

void criterion_2(Checker& c) {
    for (int k : {1, 2, 3}) {
        const double x0 = 0.5;
        const int M = (k == 1) ? 5 : ((k == 2) ? 4 : 4);
        const MeromorphicFn zf = extend_model_k(k, x0, M);
        const auto dims = complex_dimensions(zf, -2.2 * k / (k + 1.0) - 0.1);
        bool found_right = false;
        for (const auto& d : dims) {
            if (d.cancelled) continue;
            if (!found_right) {
                found_right = true;
                c.expect(std::abs(d.location - Cx(k / (k + 1.0))) < 1e-10,
                         "rightmost pole k=" + fmt(k) + ": " + fmt(d.location.real()));
            }
            // all detected poles lie in {k/(k+1)} u {-mk/(k+1)}
            const double w = d.location.real() * (k + 1.0) / k;
            c.expect(std::abs(w - std::lround(w)) < 1e-9 * (k + 1.0) / k &&
                         d.location.real() < k / (k + 1.0) + 1e-9,
                     "pole location k=" + fmt(k) + ": " + fmt(d.location.real()));
            c.expect(d.order == 1, "pole order k=" + fmt(k) + " at " + fmt(d.location.real()));
            const auto lr = residue_contour(zf, d.location, 2);
            c.expect(std::abs(lr[1]) < 1e-9,
                     "order-2 contour coefficient at " + fmt(d.location.real()));
        }
        c.expect(found_right, "no non-cancelled pole found for k=" + fmt(k));
    }
}

void criterion_3(Checker& c) {
    std::mt19937 rng(777u);
    const double x0 = 0.5;
    // parabolic back-ends against the raw Dirichlet series
    {
        const Germ g1 = Germ::model_parabolic(1, 0.0);
        const FractalString s1 = make_string(build_orbit(g1, x0, 0.01));
        const MeromorphicFn zk = extend_k1(x0, 6);
        const MeromorphicFn za = extend_shifted_a_string(1.0, 1.0 / x0, 6);
        const MeromorphicFn zm = extend_model_k(1, x0, 6);
        std::uniform_real_distribution<double> ure(0.61, 2.0);
        std::uniform_real_distribution<double> uim(-5.0, 5.0);
        for (int i = 0; i < 20; ++i) {
            const Cx s(ure(rng), uim(rng));
            const Cx raw = geometric_zeta_series(s1, s);
            c.expect(rel(zk(s), raw) < 1e-9, "extend_k1 overlap at s=" + fmt(s.real()));
            c.expect(rel(za(s), raw) < 1e-9, "astring overlap at s=" + fmt(s.real()));
            const Cx raw_dist = std::exp((1.0 - s) * std::log(2.0)) / s * raw;
            c.expect(rel(zm(s), raw_dist) < 1e-9, "modelk overlap at s=" + fmt(s.real()));
            c.expect(rel(mellin_barnes_k1(x0, s, 2, 0.5), raw) < 1e-9,
                     "mellin-barnes overlap at s=" + fmt(s.real()));
        }
        // hyperbolic closed form against its series
        const Germ gh = Germ::hyperbolic(0.5);
        const FractalString sh = make_string(build_orbit(gh, x0, 1e-6));
        const MeromorphicFn zh = hyperbolic_zeta(0.5, x0);
        std::uniform_real_distribution<double> uhe(0.15, 2.0);
        for (int i = 0; i < 20; ++i) {
            const Cx s(uhe(rng), uim(rng));
            c.expect(rel(zh(s), distance_zeta(sh, s)) < 1e-9,
                     "hyperbolic overlap at s=" + fmt(s.real()));
        }
        // extend_k1 vs mellin_barnes on the critical strip
        std::uniform_real_distribution<double> ustrip(-0.4, 0.4);
        int used = 0;
        while (used < 10) {
            Cx s(ustrip(rng), uim(rng));
            bool ok = std::abs(s) > 0.07;
            for (int r = 0; r <= 4; ++r)
                if (std::abs(s - Cx((1.0 - r) / 2.0)) < 0.07) ok = false;
            if (!ok) continue;
            if (!(s.real() > -1.0 + 0.2)) continue;
            ++used;
            c.expect(rel(mellin_barnes_k1(x0, s, 3, 0.4), zk(s)) < 1e-7,
                     "mellin-barnes strip point s=(" + fmt(s.real()) + "," + fmt(s.imag()) + ")");
        }
    }
}

void criterion_4(Checker& c) {
    const double x0 = 0.5;
    const Germ g = Germ::model_parabolic(1, 0.0);
    const Orbit o = build_orbit(g, x0, 0.9 * g.inverse_gap(2e-9));
    const auto grid = log_grid(1e-9, 1e-5, 400);
    std::vector<double> defect(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const double e = grid[i];
        defect[i] = std::abs(tube_length(o, e) -
                             (2.0 * std::sqrt(2.0) * std::sqrt(e) - 2.0 / x0 * e));
    }
    const double slope = bin_max_slope(grid, defect);
    c.expect(slope >= 1.45, "defect slope " + fmt(slope) + " (need >= 1.45)");
    c.note("defect log-log slope " + fmt(slope));
}

void criterion_5(Checker& c) {
    for (int k : {1, 2, 3}) {
        const Germ g = Germ::model_parabolic(k, 0.0);
        const Orbit o = build_orbit(g, 0.5, 0.9 * g.inverse_gap(2e-9));
        const TubeSeries v = sample_tube(o, log_grid(1e-9, 1e-4, 60));
        const BoxFit f = box_dimension_fit(v);
        c.expect(std::abs(f.dimension - k / (k + 1.0)) <= 0.01,
                 "box dimension k=" + fmt(k) + ": " + fmt(f.dimension));
    }
}

void criterion_6(Checker& c) {
    const double x0 = 0.5;
    for (double rho : {0.0, 0.7}) {
        const Germ g = Germ::model_parabolic(1, rho);
        const FatouCoordinate fc(g);
        const TubeSeries vc = sample_tube_continuous(fc, x0, log_grid(1e-9, 1e-4, 400));
        const std::vector<BasisTerm> basis = {{0.5, 0}, {1.0, 1}, {1.0, 0}, {1.5, 1},
                                              {1.5, 0}, {2.0, 1}, {2.0, 0}};
        const FitResult f = fit_expansion(vc, basis, 1e-9, 1e-4);
        c.expect(std::abs(f.coefficients[0] / (2.0 * std::sqrt(2.0)) - 1.0) < 0.005,
                 "[eps^{1/2}] coefficient rho=" + fmt(rho) + ": " + fmt(f.coefficients[0]));
        const double target_log = -4.0 * rho;
        const bool log_ok = (rho == 0.0) ? std::abs(f.coefficients[1]) < 0.02
                                         : std::abs(f.coefficients[1] / target_log - 1.0) < 0.02;
        c.expect(log_ok, "[eps log eps] coefficient rho=" + fmt(rho) + ": quoted value " +
                             fmt(target_log) + ", fitted " + fmt(f.coefficients[1]) +
                             " (= 2 rho/(k+1), the direct expansion of V^c: the only log "
                             "enters through rho log g^{-1}(2 eps))");
        if (rho == 0.0) {
            c.expect(std::abs(f.coefficients[2] / (-2.0 / x0) - 1.0) < 0.005,
                     "[eps] coefficient rho=0: " + fmt(f.coefficients[2]));
        }
    }
}

void criterion_7(Checker& c) {
    const auto ratios = regularization_ratio(0.5, 2);
    for (int m = 0; m <= 2; ++m) {
        c.expect(std::abs(ratios[static_cast<size_t>(m)] - (2.0 * m + 1.0)) <=
                     0.01 * (2.0 * m + 1.0),
                 "ratio m=" + fmt(m) + ": " + fmt(ratios[static_cast<size_t>(m)]));
    }
}

void criterion_8(Checker& c) {
    // analytic-residue route
    for (int k : {1, 2, 3}) {
        for (double a : {0.5, 1.0, 2.0}) {
            for (double rho : {-0.5, 0.0, 0.7}) {
                const double kd = k;
                const double res1 =
                    std::pow(2.0, 1.0 / (kd + 1.0)) * std::pow(a, -1.0 / (kd + 1.0)) / kd;
                const double ak1 = -2.0 * rho / (kd + 1.0);
                const RecoveredClass rc = recover_formal_class(kd / (kd + 1.0), res1, ak1);
                c.expect(rc.cls.k == k, "analytic route k");
                c.expect(std::abs(rc.cls.a - a) < 1e-6 * std::max(1.0, a), "analytic route a");
                c.expect(std::abs(rc.cls.rho - rho) < 1e-6, "analytic route rho");
            }
        }
    }
    // fitted-coefficient route for model germs
    for (int k : {1, 2}) {
        for (double rho : {-0.5, 0.0, 0.7}) {
            const Germ g = Germ::model_parabolic(k, rho);
            const double x0 = 0.5;
            const FatouCoordinate fc(g);
            const TubeSeries vc = sample_tube_continuous(fc, x0, log_grid(1e-9, 1e-4, 400));
            const BoxFit bf = box_dimension_fit(vc);
            const double omega1 = bf.dimension;
            const long kk = std::lround(omega1 / (1.0 - omega1));
            c.expect(kk == k, "fit route k for (k,rho)=(" + fmt(k) + "," + fmt(rho) + ")");
            std::vector<BasisTerm> basis;
            const double step = 1.0 / (k + 1.0);
            for (int m = 1; m <= 2 * (k + 1); ++m) {
                if (m % (k + 1) == 0 || m > k + 1) basis.push_back({m * step, 1});
                basis.push_back({m * step, 0});
            }
            const FitResult f = fit_expansion(vc, basis, 1e-9, 1e-4);
            double a1 = 0.0, alog = 0.0;
            for (size_t j = 0; j < basis.size(); ++j) {
                if (basis[j].exponent == step && basis[j].log_power == 0)
                    a1 = f.coefficients[j];
                if (basis[j].exponent == 1.0 && basis[j].log_power == 1)
                    alog = f.coefficients[j];
            }
            const RecoveredClass rc =
                recover_formal_class(k / (k + 1.0), a1 / (k + 1.0), -alog);
            c.expect(std::abs(rc.cls.a - 1.0) < 0.02,
                     "fit route a for (k,rho)=(" + fmt(k) + "," + fmt(rho) +
                         "): " + fmt(rc.cls.a));
            const bool rho_ok = (rho == 0.0) ? std::abs(rc.cls.rho) < 0.02
                                             : std::abs(rc.cls.rho / rho - 1.0) < 0.02;
            c.expect(rho_ok, "fit route rho for (k,rho)=(" + fmt(k) + "," + fmt(rho) +
                                 "): " + fmt(rc.cls.rho));
        }
    }
}

void criterion_9(Checker& c) {
    std::mt19937 rng(909u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double a : {0.3, 0.5}) {
        const double x0 = 0.5;
        const double L = std::log(a);
        const Germ g = Germ::hyperbolic(a);
        const Orbit o = build_orbit(g, x0, 1e-10);
        auto F = [&](double s) {
            return 2.0 * std::log(2.0 / (x0 * (1.0 - a))) / L + 2.0 * s +
                   2.0 * std::pow(a, s) / (1.0 - a);
        };
        const double tail = hyperbolic_fourier_tail_bound(a, 2000);
        for (int i = 0; i < 50; ++i) {
            const double eps = 1e-8 * std::pow(o.eps0() * 0.99 / 1e-8, u(rng));
            const double tau = std::log(2.0 * eps / (x0 * (1.0 - a))) / L;
            const double v = tube_length(o, eps);
            const double exact = -2.0 / L * eps * (-std::log(eps)) + eps * F(sawtooth_G(tau));
            c.expect(std::abs(v - exact) < 1e-12, "exact tube formula a=" + fmt(a));
            const double fourier =
                -2.0 / L * eps * (-std::log(eps)) + eps * hyperbolic_fourier_H(a, x0, tau, 2000);
            c.expect(std::abs(v - fourier) <= eps * tail + 1e-13,
                     "Fourier form a=" + fmt(a) + " at eps=" + fmt(eps));
        }
        // nonreal pole locations for |k| <= 5
        const MeromorphicFn zh = hyperbolic_zeta(a, x0);
        for (int k = -5; k <= 5; ++k) {
            if (k == 0) continue;
            const Cx want(0.0, 2.0 * 3.14159265358979323846 * k / L);
            bool found = false;
            for (const auto& t : zh.structure()) {
                if (std::abs(t.pole - want) < 1e-10) {
                    const auto lr = residue_contour(zh, t.pole, 1);
                    if (std::abs(lr[0]) > 1e-9) found = true;
                }
            }
            c.expect(found, "nonreal pole k=" + fmt(k) + " for a=" + fmt(a));
        }
    }
}

void criterion_10(Checker& c) {
    const double x0 = 0.5;
    const Germ g = Germ::model_parabolic(1, 0.0);
    const Orbit o = build_orbit(g, x0, 1e-5);
    TubeSeries v = sample_tube(o, log_grid(1e-8, 1.0, 4000));
    const double c3 = std::pow(2.0, 2.5) / 24.0;
    const double c4 = std::pow(2.0, 3.5) / (-15.0) * (3.0 / 128.0);
    v.head_terms = {{0.5, 2.0 * std::sqrt(2.0)}, {1.0, -2.0 / x0}, {1.5, c3}, {2.5, c4}};
    std::vector<TubeSeries> prims = {primitive_samples(v, 1), primitive_samples(v, 2)};

    const double pts[5] = {0.62, 0.8, 0.95, 1.2, 1.5};
    for (double sr : pts) {
        const Cx s(sr);
        const Cx direct = tube_zeta_numeric(v, s, 1.0);
        const Cx via1 = tube_zeta_via_primitives({prims[0]}, s, 1.0);
        const Cx via2 = tube_zeta_via_primitives(prims, s, 1.0);
        c.expect(rel(via1, direct) < 1e-5, "primitive route m=1 at s=" + fmt(sr));
        c.expect(rel(via2, direct) < 1e-5, "primitive route m=2 at s=" + fmt(sr));
    }
    // distance <-> tube relation zeta_f = delta^{s-N} x0 + (N-s) zeta~
    const FractalString str = make_string(build_orbit(g, x0, 0.01));
    for (double sr : pts) {
        const Cx s(sr);
        const Cx lhs = distance_zeta(str, s);
        const Cx rhs = x0 + (1.0 - s) * tube_zeta_numeric(v, s, 1.0);
        c.expect(rel(lhs, rhs) < 1e-6, "distance-tube relation at s=" + fmt(sr));
    }
    // expansion principal parts at {1/2, 0} against the extension Laurent data
    ExpansionTermList terms;
    terms.m = 0;
    terms.delta = 1.0;
    terms.N = 1;
    terms.terms = {{0.5, 2.0 * std::sqrt(2.0), {1.0}}, {1.0, -2.0 / x0, {1.0}}};
    const MeromorphicFn fn = expansion_zeta(terms);
    const MeromorphicFn zf = induced_distance_zeta(extend_k1(x0, 4), -1.0 / x0);
    for (const auto& t : fn.structure()) {
        for (const auto& u2 : zf.structure()) {
            if (std::abs(t.pole - u2.pole) < 1e-12) {
                c.expect(std::abs(t.laurent[0] - u2.laurent[0]) < 1e-8,
                         "expansion principal part at " + fmt(t.pole.real()));
            }
        }
    }
}

void criterion_11(Checker& c) {
    // dichotomy spot check; the full property suites run in unit_tests
    for (int k : {1, 2}) {
        const MeromorphicFn zf = extend_model_k(k, 0.5, 5);
        for (const auto& d : complex_dimensions(zf, -1.2, 20.0)) {
            c.expect(d.location.imag() == 0.0, "parabolic pole off the real axis");
        }
    }
    int nonreal = 0;
    for (const auto& d : complex_dimensions(hyperbolic_zeta(0.5, 0.5), -1.0, 20.0)) {
        if (std::abs(d.location.imag()) > 1e-9 && !d.cancelled) ++nonreal;
    }
    c.expect(nonreal > 0, "hyperbolic nonreal dimensions missing");
    c.note("remaining invariant suites run under ctest (unit_tests binary)");
}

} // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
    struct Entry {
        int number;
        const char* name;
        void (*fn)(Checker&);
    };
    const Entry entries[] = {
        {1, "k=1 residues at 1/2 and 0 (contour on extend_k1)", criterion_1},
        {2, "model pole layout for k in {1,2,3}", criterion_2},
        {3, "series/extension overlap and Mellin-Barnes agreement", criterion_3},
        {4, "tube-formula reconstruction slope (poles 1/2, 0)", criterion_4},
        {5, "box dimension fit for k in {1,2,3}", criterion_5},
        {6, "continuous tube expansion coefficients", criterion_6},
        {7, "regularization ratio 2m+1", criterion_7},
        {8, "formal-class round trips (analytic and fitted)", criterion_8},
        {9, "hyperbolic exact tube formula and Fourier form", criterion_9},
        {10, "tube/distance zeta functional equations", criterion_10},
        {11, "property-suite spot checks and dichotomy", criterion_11},
    };
    std::vector<CriterionResult> results;
    for (const Entry& e : entries) {
        Checker c;
        c.result.number = e.number;
        c.result.name = e.name;
        c.result.passed = true;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(c);
        } catch (const std::exception& ex) {
            c.result.passed = false;
            c.result.notes.push_back(std::string("exception: ") + ex.what());
        }
        const auto t1 = std::chrono::steady_clock::now();
        c.result.seconds = std::chrono::duration<double>(t1 - t0).count();
        out << (c.result.passed ? "PASS" : "FAIL") << "  criterion " << c.result.number << ": "
            << c.result.name << "  [" << fmt(c.result.seconds) << " s]\n";
        for (const std::string& n : c.result.notes) out << "      " << n << "\n";
        results.push_back(std::move(c.result));
    }
    return results;
}

} // namespace orbzeta
