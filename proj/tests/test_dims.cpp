#include "doctest.h"

#include <cmath>
#include <random>

#include "orbzeta/dims.hpp"

using namespace orbzeta;

namespace {

double rel_err(Cx got, Cx want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("residue_contour: k=1 distance zeta and hyperbolic Laurent data") {
    for (double x0 : {0.3, 0.5, 0.7}) {
        const MeromorphicFn zf = induced_distance_zeta(extend_k1(x0, 6), -1.0 / x0);
        const auto r_half = residue_contour(zf, Cx(0.5), 1);
        CHECK(rel_err(r_half[0], Cx(std::sqrt(2.0))) < 1e-10);
        // contour residue at 0; the verified value is -2/x0 (see the
        // decisions notes on the quoted 1 - 2/x0)
        const auto r_zero = residue_contour(zf, Cx(0.0), 2);
        CHECK(rel_err(r_zero[0], Cx(-2.0 / x0)) < 1e-9);
        CHECK(std::abs(r_zero[1]) < 1e-9); // simple pole
    }
    // hyperbolic double pole at 0 against the series-product oracle
    {
        const double a = 0.5, x0 = 0.5;
        const double L = std::log(a), B = std::log(x0 * (1.0 - a) / 2.0);
        const MeromorphicFn zh = hyperbolic_zeta(a, x0);
        const auto c = residue_contour(zh, Cx(0.0), 2);
        // product of local expansions: 2 e^{sB} * (-1/(L s^2)) (1 - sL/2 + ...)
        const double c2 = -2.0 / L;
        const double c1 = -2.0 / L * (B - L / 2.0);
        CHECK(rel_err(c[1], Cx(c2)) < 1e-10);
        CHECK(rel_err(c[0], Cx(c1)) < 1e-10);
    }
}

TEST_CASE("complex_dimensions: model k=1 window and model-k rightmost") {
    {
        const MeromorphicFn zf = induced_distance_zeta(extend_k1(0.5, 7), -2.0);
        const auto dims = complex_dimensions(zf, -2.2);
        std::vector<double> live, dead;
        for (const auto& d : dims) {
            (d.cancelled ? dead : live).push_back(d.location.real());
        }
        const std::vector<double> expect_live = {0.5, 0.0, -0.5, -1.5};
        REQUIRE(live.size() == expect_live.size());
        for (size_t i = 0; i < live.size(); ++i)
            CHECK(live[i] == doctest::Approx(expect_live[i]).epsilon(1e-12));
        REQUIRE(dead.size() == 2);
        CHECK(dead[0] == doctest::Approx(-1.0));
        CHECK(dead[1] == doctest::Approx(-2.0));
    }
    for (int k : {1, 2, 3}) {
        const MeromorphicFn zf = extend_model_k(k, 0.5, 4);
        const auto dims = complex_dimensions(zf, -0.2);
        REQUIRE(!dims.empty());
        CHECK(dims.front().location.real() == doctest::Approx(k / (k + 1.0)).epsilon(1e-12));
        CHECK(dims.front().order == 1);
    }
    // hyperbolic: double pole at 0 plus nonreal poles at 2 k pi i / log a
    {
        const double a = 0.5;
        const MeromorphicFn zh = hyperbolic_zeta(a, 0.5);
        const double period = 2.0 * 3.14159265358979323846 / std::log(a);
        const auto dims = complex_dimensions(zh, -0.5, 3.2 * std::abs(period));
        int nonreal = 0;
        for (const auto& d : dims) {
            if (std::abs(d.location.imag()) > 1e-12) {
                ++nonreal;
                CHECK(!d.cancelled);
                CHECK(d.order == 1);
            } else {
                CHECK(d.order == 2);
            }
        }
        CHECK(nonreal == 6);
    }
}

TEST_CASE("tube_formula: leading terms of the k=1 model") {
    const double x0 = 0.5;
    const MeromorphicFn zf = induced_distance_zeta(extend_k1(x0, 6), -2.0);
    const auto all = complex_dimensions(zf, -2.2);
    // only omega = 1/2
    std::vector<ComplexDimension> first(all.begin(), all.begin() + 1);
    CHECK(first[0].location == Cx(0.5));
    for (double eps : {1e-4, 1e-6}) {
        CHECK(tube_formula(first, eps) ==
              doctest::Approx(2.0 * std::sqrt(2.0) * std::sqrt(eps)).epsilon(1e-12));
    }
    // omega in {1/2, 0}
    std::vector<ComplexDimension> two(all.begin(), all.begin() + 2);
    for (double eps : {1e-4, 1e-6}) {
        CHECK(tube_formula(two, eps) ==
              doctest::Approx(2.0 * std::sqrt(2.0) * std::sqrt(eps) - 2.0 / x0 * eps)
                  .epsilon(1e-11));
    }
    // hyperbolic double pole reproduces the eps log eps and eps terms
    {
        const double a = 0.5, x0h = 0.5;
        const double L = std::log(a), B = std::log(x0h * (1.0 - a) / 2.0);
        const MeromorphicFn zh = hyperbolic_zeta(a, x0h);
        const auto dims = complex_dimensions(zh, -0.5, 1e-9); // real pole only
        REQUIRE(dims.size() == 1);
        for (double eps : {1e-5, 1e-8}) {
            const double expect =
                -2.0 / L * eps * (-std::log(eps)) + (1.0 - 2.0 * (1.0 + B) / L) * eps;
            CHECK(tube_formula(dims, eps) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("tube-formula reconstruction: distributional defect slopes") {
    // The defect V_f - reconstruction paired against smooth log-eps bumps
    // decays at the distributional remainder rate. V is piecewise linear in
    // eps between consecutive eps_n, so the pairing integral is done exactly
    // piece by piece (per-piece Simpson), which suppresses the sawtooth
    // oscillation instead of aliasing it.
    const double x0 = 0.5;
    const Germ g = Germ::model_parabolic(1, 0.0);
    const Orbit o = build_orbit(g, x0, 0.9 * g.inverse_gap(2e-11));
    const MeromorphicFn zf = induced_distance_zeta(extend_k1(x0, 9), -2.0);
    std::vector<ComplexDimension> all;
    for (const auto& t : zf.structure()) {
        if (t.cancelled) continue;
        ComplexDimension d;
        d.location = t.pole;
        d.order = t.order;
        d.principal = t.laurent;
        all.push_back(d);
    }
    for (int L : {1, 2, 3}) {
        // pole window P_L: {1/2 - l, l <= floor(L/2)} plus the pole at 0;
        // remainder O(eps^{1+L/2})
        std::vector<ComplexDimension> used;
        for (const auto& d : all)
            if (d.location.real() >= std::min(0.5 - std::floor(L / 2.0), 0.0) - 1e-9)
                used.push_back(d);
        std::vector<double> lx, ly;
        const double cmin = (L == 1) ? 1e-6 : ((L == 2) ? 3e-5 : 1e-4);
        for (double center = cmin; center < 1.6e-3; center *= std::pow(10.0, 0.5)) {
            const double u0 = std::log(center);
            const double sig = 0.25 * std::log(10.0);
            const double elo = center * std::pow(10.0, -1.7);
            const double ehi = center * std::pow(10.0, 1.7);
            auto weight = [&](double e) {
                return std::exp(-0.5 * std::pow((std::log(e) - u0) / sig, 2.0));
            };
            auto defect = [&](double e) {
                return (tube_length(o, e) - tube_formula(used, e)) * weight(e);
            };
            // breakpoints eps_n inside [elo, ehi], descending in n
            const long nhi = critical_index(o, elo);
            const long nlo = critical_index(o, ehi);
            double num = 0.0, den = 0.0;
            double lo = elo;
            for (long n = nhi - 1; n >= nlo - 1; --n) {
                const double hi = (n >= 0 && o.gaps[static_cast<size_t>(n)] / 2.0 < ehi)
                                      ? o.gaps[static_cast<size_t>(n)] / 2.0
                                      : ehi;
                if (hi <= lo) continue;
                // 5-point composite Simpson on the smooth piece
                const double h = (hi - lo) / 4.0;
                num += h / 3.0 *
                       (defect(lo) + 4.0 * defect(lo + h) + 2.0 * defect(lo + 2.0 * h) +
                        4.0 * defect(lo + 3.0 * h) + defect(hi));
                den += h / 3.0 *
                       (weight(lo) + 4.0 * weight(lo + h) + 2.0 * weight(lo + 2.0 * h) +
                        4.0 * weight(lo + 3.0 * h) + weight(hi));
                lo = hi;
                if (hi >= ehi) break;
            }
            lx.push_back(u0);
            ly.push_back(std::log(std::abs(num / den)));
        }
        const double slope = lsq_slope(lx, ly);
        CHECK(slope >= 1.0 + L / 2.0 - 0.05);
    }
}

TEST_CASE("recover_formal_class: examples and round trips") {
    {
        const RecoveredClass rc = recover_formal_class(0.5, std::sqrt(2.0), 0.0);
        CHECK(rc.cls.k == 1);
        CHECK(rc.cls.a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rc.cls.rho == doctest::Approx(0.0));
        CHECK(rc.integrality_defect < 1e-12);
    }
    CHECK(recover_formal_class(2.0 / 3.0, 0.63, 0.0).cls.k == 2);
    {
        // (k=1, a=1, rho=0.7): Res(s zeta_f, 0) = -2 rho/(k+1) = -0.7
        const RecoveredClass rc = recover_formal_class(0.5, std::sqrt(2.0), -0.7);
        CHECK(rc.cls.rho == doctest::Approx(0.7).epsilon(1e-12));
    }
    CHECK_THROWS_AS(recover_formal_class(0.52, 1.0, 0.0), NonIntegralMultiplicity);

    // forward residues -> recovery is the identity on a (k, a, rho) grid
    for (int k : {1, 2, 3}) {
        for (double a : {0.5, 1.0, 2.0}) {
            for (double rho : {-0.5, 0.0, 0.7}) {
                const double kd = k;
                const double res1 = std::pow(2.0, 1.0 / (kd + 1.0)) * std::pow(a, -1.0 / (kd + 1.0)) / kd;
                const double ak1 = -2.0 * rho / (kd + 1.0);
                const RecoveredClass rc = recover_formal_class(kd / (kd + 1.0), res1, ak1);
                CHECK(rc.cls.k == k);
                CHECK(rc.cls.a == doctest::Approx(a).epsilon(1e-6));
                CHECK(rc.cls.rho == doctest::Approx(rho).epsilon(1e-6));
            }
        }
    }

    // the a-recovery inverts a contour-measured residue: k=1 germ with
    // leading coefficient a has string a^{-s}/((j+X)(j+1+X)), X = 1/(a x0)
    for (double a : {0.5, 2.0}) {
        const double x0 = 0.4;
        const MeromorphicFn geo = extend_k1(a * x0, 6); // string base X = 1/(a x0)
        auto dist_eval = [geo, a](Cx s) {
            return std::exp((1.0 - s) * std::log(2.0) - s * std::log(a)) / s * geo(s);
        };
        const MeromorphicFn zf(dist_eval, geo.sigma_min(), 6, geo.structure(), "scaled");
        const auto r = residue_contour(zf, Cx(0.5), 1);
        const RecoveredClass rc = recover_formal_class(0.5, r[0].real(), 0.0);
        CHECK(rc.cls.k == 1);
        CHECK(rc.cls.a == doctest::Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("box_dimension_fit: synthetic and model orbits") {
    // synthetic exact power law
    {
        TubeSeries s;
        s.eps = log_grid(1e-9, 1e-4, 100);
        s.value.resize(s.eps.size());
        for (size_t i = 0; i < s.eps.size(); ++i) s.value[i] = 5.0 * std::pow(s.eps[i], 0.3);
        const BoxFit f = box_dimension_fit(s);
        CHECK(f.dimension == doctest::Approx(0.7).epsilon(1e-6));
        CHECK(f.content == doctest::Approx(5.0).epsilon(1e-6));
    }
    for (int k : {1, 3}) {
        const Germ g = Germ::model_parabolic(k, 0.0);
        const Orbit o = build_orbit(g, 0.5, 0.9 * g.inverse_gap(2e-9));
        const TubeSeries v = sample_tube(o, log_grid(1e-9, 1e-4, 60));
        const BoxFit f = box_dimension_fit(v);
        CHECK(std::abs(f.dimension - k / (k + 1.0)) < 0.01);
    }
    TubeSeries tiny;
    tiny.eps = log_grid(1e-5, 1e-4, 40);
    tiny.value.assign(tiny.eps.size(), 1.0);
    CHECK_THROWS_AS(box_dimension_fit(tiny), InsufficientRange);
}

TEST_CASE("fit_expansion: synthetic recovery and model coefficients") {
    // synthetic sum with known coefficients recovers exactly
    {
        TubeSeries s;
        s.eps = log_grid(1e-9, 1e-4, 200);
        s.value.resize(s.eps.size());
        for (size_t i = 0; i < s.eps.size(); ++i) {
            const double e = s.eps[i];
            s.value[i] = 1.7 * std::sqrt(e) - 3.1 * e * std::log(e) + 0.4 * e +
                         2.2 * std::pow(e, 1.5);
        }
        const std::vector<BasisTerm> basis = {{0.5, 0}, {1.0, 1}, {1.0, 0}, {1.5, 0}};
        const FitResult f = fit_expansion(s, basis, 1e-9, 1e-4);
        CHECK(f.coefficients[0] == doctest::Approx(1.7).epsilon(1e-10));
        CHECK(f.coefficients[1] == doctest::Approx(-3.1).epsilon(1e-10));
        CHECK(f.coefficients[2] == doctest::Approx(0.4).epsilon(1e-8));
        CHECK(f.coefficients[3] == doctest::Approx(2.2).epsilon(1e-8));
        CHECK(f.reliable);
    }
    // model k=1 V^c: basis {1/2, 1, 3/2} recovers (2 sqrt 2, -2/x0, ...)
    {
        const double x0 = 0.5;
        const Germ g = Germ::model_parabolic(1, 0.0);
        const FatouCoordinate fc(g);
        const TubeSeries vc = sample_tube_continuous(fc, x0, log_grid(1e-9, 1e-4, 400));
        const std::vector<BasisTerm> basis = {{0.5, 0}, {1.0, 0}, {1.5, 0}, {2.0, 0}, {2.5, 0}};
        const FitResult f = fit_expansion(vc, basis, 1e-9, 1e-4);
        CHECK(std::abs(f.coefficients[0] / (2.0 * std::sqrt(2.0)) - 1.0) < 1e-4);
        CHECK(std::abs(f.coefficients[1] / (-2.0 / x0) - 1.0) < 1e-4);
    }
    // model (k=1, rho=0.7): eps log eps coefficient -4 rho within 2%
    {
        const Germ g = Germ::model_parabolic(1, 0.7);
        const FatouCoordinate fc(g);
        const double x0 = 0.5;
        const TubeSeries vc = sample_tube_continuous(fc, x0, log_grid(1e-9, 1e-4, 400));
        // V^c carries only first powers of log eps: tau_eps contributes the
        // single rho log and f^{tau_eps}(x0) = g^{-1}(2 eps) is log-free.
        const std::vector<BasisTerm> basis = {{0.5, 0}, {1.0, 1}, {1.0, 0}, {1.5, 1},
                                              {1.5, 0}, {2.0, 1}, {2.0, 0}};
        const FitResult f = fit_expansion(vc, basis, 1e-9, 1e-4);
        // eps log eps coefficient 2 rho/(k+1) = +0.7 (a-independent); see
        // the decisions notes on the quoted -4 rho
        CHECK(std::abs(f.coefficients[1] / 0.7 - 1.0) < 0.02);
        CHECK(std::abs(f.coefficients[0] / (2.0 * std::sqrt(2.0)) - 1.0) < 0.005);
    }
}

TEST_CASE("regularization_ratio: 2m+1") {
    const auto ratios = regularization_ratio(0.5, 2);
    REQUIRE(ratios.size() == 3);
    CHECK(std::abs(ratios[0] - 1.0) < 0.01);
    CHECK(std::abs(ratios[1] - 3.0) < 0.01);
    CHECK(std::abs(ratios[2] - 5.0) < 0.01);
    // k = 2: measured and reported, not asserted (conjectural analogue)
    const auto r2 = regularization_ratio(0.5, 1, 2);
    REQUIRE(r2.size() == 2);
    for (double r : r2) CHECK(std::isfinite(r));
    MESSAGE("k=2 regularization ratios (reported): ", r2[0], " ", r2[1]);
}

TEST_CASE("hyperbolic_fourier_H: closed form and tube identity") {
    const double a = 0.5, x0 = 0.5;
    const double L = std::log(a);
    auto F = [&](double s) {
        return 2.0 * std::log(2.0 / (x0 * (1.0 - a))) / L + 2.0 * s +
               2.0 * std::pow(a, s) / (1.0 - a);
    };
    // mean over one period equals the constant term
    {
        double mean = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) mean += hyperbolic_fourier_H(a, x0, (i + 0.5) / n, 400);
        mean /= n;
        const double c0 = 1.0 + (std::log(4.0) - 2.0) / L - 2.0 * std::log(x0 * (1.0 - a)) / L;
        CHECK(mean == doctest::Approx(c0).epsilon(1e-6));
    }
    // K = 2000 partial sum matches F(G(t)) within the tail bound
    {
        const double t = 0.37;
        const double tail = hyperbolic_fourier_tail_bound(a, 2000);
        const double got = hyperbolic_fourier_H(a, x0, t, 2000);
        CHECK(std::abs(got - F(sawtooth_G(t))) <= tail + 1e-12);
    }
    // V from the tube module equals -(2/L) eps(-log eps) + eps H(tau) within
    // the bound, 50 random eps
    {
        const Germ g = Germ::hyperbolic(a);
        const Orbit o = build_orbit(g, x0, 1e-9);
        std::mt19937 rng(31u);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double tail = hyperbolic_fourier_tail_bound(a, 2000);
        for (int i = 0; i < 50; ++i) {
            const double eps = 1e-7 * std::pow(o.eps0() * 0.99 / 1e-7, u(rng));
            const double tau = std::log(2.0 * eps / (x0 * (1.0 - a))) / L;
            const double model =
                -2.0 / L * eps * (-std::log(eps)) + eps * hyperbolic_fourier_H(a, x0, tau, 2000);
            CHECK(std::abs(tube_length(o, eps) - model) <= eps * tail + 1e-12);
        }
    }
}

TEST_CASE("parabolic extensions have real poles only; hyperbolic has nonreal ones") {
    for (int k : {1, 2}) {
        const MeromorphicFn zf = extend_model_k(k, 0.5, 5);
        for (const auto& d : complex_dimensions(zf, -1.4, 20.0)) {
            CHECK(d.location.imag() == 0.0);
        }
    }
    const auto dims = complex_dimensions(hyperbolic_zeta(0.5, 0.5), -1.0, 20.0);
    int nonreal = 0;
    for (const auto& d : dims)
        if (std::abs(d.location.imag()) > 1e-9 && !d.cancelled) ++nonreal;
    CHECK(nonreal > 0);
}

TEST_CASE("residue x0-independence at k/(k+1), dependence at 0") {
    for (int k : {1, 2}) {
        std::vector<double> residues;
        for (double x0 : {0.3, 0.5, 0.7}) {
            const MeromorphicFn zf = extend_model_k(k, x0, 4);
            const auto r = residue_contour(zf, Cx(k / (k + 1.0)), 1);
            residues.push_back(r[0].real());
            // residue at 0 equals -2/(k x0^k) for the cut-off distance zeta
            const auto r0 = residue_contour(zf, Cx(0.0), 1);
            CHECK(rel_err(r0[0], Cx(-2.0 / (k * std::pow(x0, k)))) < 1e-8);
        }
        CHECK(std::abs(residues[0] - residues[1]) < 1e-8);
        CHECK(std::abs(residues[1] - residues[2]) < 1e-8);
        // closed-form value 2^{1/(k+1)} (1 + 1/k) / (k+1) for the model (a=1)
        const double expect =
            std::pow(2.0, 1.0 / (k + 1.0)) * (1.0 + 1.0 / k) / (k + 1.0);
        CHECK(std::abs(residues[0] - expect) < 1e-10);
    }
}

TEST_CASE("growth probe reports a finite slope") {
    const MeromorphicFn zf = induced_distance_zeta(extend_k1(0.5, 4), -2.0);
    const double slope = growth_probe(zf, 0.25, {5.0, 8.0, 13.0, 21.0, 34.0});
    CHECK(std::isfinite(slope));
}

TEST_CASE("polynomial germ pipeline: fit route recovers (k, a, rho)") {
    // jet x - x^2 + 0.3 x^3 has (k, a, rho) = (1, 1, 0.7); the embedding
    // field is v = -x^2 - 0.7 x^3 + ...
    struct Case {
        std::vector<double> coeffs;
        double a;
        double rho;
    };
    const std::vector<Case> cases = {{{1.0, -1.0, 0.3}, 1.0, 0.7},
                                     {{1.0, -2.0, 1.2}, 2.0, 0.7}};
    for (const auto& c : cases) {
        const Germ g = Germ::jet_parabolic(c.coeffs);
        const FormalClass exact = formal_class_of(g);
        CHECK(exact.k == 1);
        CHECK(exact.a == doctest::Approx(c.a).epsilon(1e-12));
        CHECK(exact.rho == doctest::Approx(c.rho).epsilon(1e-10));

        const double x0 = 0.3;
        const FatouCoordinate fc(g);
        const TubeSeries vc = sample_tube_continuous(fc, x0, log_grid(1e-9, 1e-4, 200));
        const BoxFit bf = box_dimension_fit(vc);
        CHECK(std::abs(bf.dimension - 0.5) < 0.01);
        const std::vector<BasisTerm> basis = {{0.5, 0}, {1.0, 1}, {1.0, 0}, {1.5, 1},
                                              {1.5, 0}, {2.0, 1}, {2.0, 0}};
        const FitResult f = fit_expansion(vc, basis, 1e-9, 1e-4);
        const RecoveredClass rc =
            recover_formal_class(0.5, f.coefficients[0] / 2.0, -f.coefficients[1]);
        CHECK(rc.cls.k == 1);
        CHECK(std::abs(rc.cls.a - c.a) < 0.02 * c.a);
        CHECK(std::abs(rc.cls.rho - c.rho) < 0.02 * c.rho);
    }
}
