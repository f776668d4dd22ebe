#include "orbzeta/dims.hpp"

#include <algorithm>
#include <cmath>

namespace orbzeta {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kCancelTol = 1e-9;

std::vector<Cx> contour_pass(const MeromorphicFn& fn, Cx omega, double r, int order_hint, int n) {
    std::vector<Cx> c(static_cast<size_t>(order_hint), Cx(0.0));
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * (j + 0.5) / n;
        const Cx dz = r * std::exp(Cx(0.0, th));
        const Cx val = fn(omega + dz);
        Cx zq = dz;
        for (int q = 1; q <= order_hint; ++q) {
            c[static_cast<size_t>(q - 1)] += val * zq;
            zq *= dz;
        }
    }
    for (Cx& v : c) v /= static_cast<double>(n);
    return c;
}

} // namespace

std::vector<Cx> residue_contour(const MeromorphicFn& fn, Cx omega, int order_hint) {
    if (order_hint < 1) throw DomainError("residue_contour: order_hint must be >= 1");
    if (!(omega.real() > fn.sigma_min()))
        throw OutOfRange("residue_contour: omega outside the validity half-plane");
    double d = 1e300;
    for (const PrincipalTerm& t : fn.structure()) {
        const double dist = std::abs(t.pole - omega);
        if (dist > 1e-12) d = std::min(d, dist);
    }
    double r = std::min(0.1, d / 2.0);
    if (fn.sigma_min() > -1e290) r = std::min(r, 0.9 * (omega.real() - fn.sigma_min()));
    if (!(r > 1e-6)) throw RadiusTooSmall("residue_contour: contour radius below 1e-6");

    const std::vector<Cx> c1 = contour_pass(fn, omega, r, order_hint, 128);
    const std::vector<Cx> c2 = contour_pass(fn, omega, r, order_hint, 256);
    for (int q = 1; q <= order_hint; ++q) {
        const double diff = std::abs(c1[static_cast<size_t>(q - 1)] - c2[static_cast<size_t>(q - 1)]);
        if (diff > 1e-9 * std::max(1.0, std::abs(c2[static_cast<size_t>(q - 1)])))
            throw NonConvergent("residue_contour: doubled-node check failed");
    }
    return c2;
}

std::vector<ComplexDimension> complex_dimensions(const MeromorphicFn& fn, double window_left,
                                                 double im_window) {
    if (!(window_left > fn.sigma_min()))
        throw DomainError("complex_dimensions: window_left must lie inside the validity half-plane");
    std::vector<ComplexDimension> out;
    for (const PrincipalTerm& t : fn.structure()) {
        if (t.pole.real() <= window_left) continue;
        if (std::abs(t.pole.imag()) > im_window) continue;
        const int hint = t.order + 1;
        const std::vector<Cx> laurent = residue_contour(fn, t.pole, hint);
        ComplexDimension d;
        d.location = t.pole;
        int detected = 0;
        for (int q = 1; q <= hint; ++q) {
            if (std::abs(laurent[static_cast<size_t>(q - 1)]) > kCancelTol) detected = q;
        }
        d.cancelled = (detected == 0);
        d.order = std::max(detected, 1);
        d.principal.assign(laurent.begin(), laurent.begin() + d.order);
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end(), [](const ComplexDimension& a, const ComplexDimension& b) {
        if (a.location.real() != b.location.real()) return a.location.real() > b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

double tube_formula(const std::vector<ComplexDimension>& dims, double eps) {
    Cx total = 0.0;
    for (const ComplexDimension& d : dims) {
        if (d.cancelled) continue;
        const Cx w = d.location;
        if (std::abs(w - 1.0) < 1e-9) throw PoleAtOne("tube_formula: pole at s = 1");
        // Taylor coefficients of eps^{1-s}/(1-s) at w:
        // T_p = eps^{1-w} sum_{i+j=p} (-log eps)^i / i! / (1-w)^{j+1}
        const Cx lead = std::exp((1.0 - w) * std::log(eps));
        const double ml = -std::log(eps);
        for (int q = 1; q <= d.order; ++q) {
            const int p = q - 1;
            Cx tp = 0.0;
            double fact = 1.0;
            for (int i = 0; i <= p; ++i) {
                if (i > 0) fact *= i;
                tp += std::pow(ml, i) / fact / std::pow(1.0 - w, p - i + 1);
            }
            total += d.principal[static_cast<size_t>(q - 1)] * lead * tp;
        }
    }
    return total.real();
}

RecoveredClass recover_formal_class(double omega1, double res1, double a_k1) {
    if (!(omega1 > 0.0 && omega1 < 1.0))
        throw DomainError("recover_formal_class: omega1 must lie in (0, 1)");
    if (!(res1 > 0.0)) throw DomainError("recover_formal_class: res1 must be positive");
    const double k_real = omega1 / (1.0 - omega1);
    const long k = std::lround(k_real);
    const double defect = std::abs(k_real - static_cast<double>(k));
    if (k < 1 || defect >= 0.02)
        throw NonIntegralMultiplicity("recover_formal_class: k/(k+1) integrality defect >= 0.02");
    const double kd = static_cast<double>(k);
    // Res(zeta_f, k/(k+1)) = 2^{1/(k+1)} a^{-1/(k+1)} / k, verified by
    // contour quadrature and the linear-scaling law of orbits (the quoted
    // residue formula reduces to this at a = 1; see the decisions notes).
    const double a = std::pow(std::pow(2.0, 1.0 / (kd + 1.0)) / (kd * res1), kd + 1.0);
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("recover_formal_class: residue incompatible with a positive leading coefficient");
    // Res(s zeta_f(s), 0) = -2 rho/(k+1): the eps log eps coefficient of
    // V^c is 2 rho/(k+1), a-independent.
    RecoveredClass rc;
    rc.cls.k = static_cast<int>(k);
    rc.cls.a = a;
    rc.cls.rho = -(kd + 1.0) / 2.0 * a_k1;
    rc.integrality_defect = defect;
    return rc;
}

BoxFit box_dimension_fit(const TubeSeries& samples) {
    if (samples.eps.size() < 8 || samples.eps.back() / samples.eps.front() < 0.999e3)
        throw InsufficientRange("box_dimension_fit: need at least 3 decades of eps");
    const size_t n = samples.eps.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(samples.eps[i]);
        const double y = std::log(samples.value[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nd = static_cast<double>(n);
    const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / nd;
    double ss_res = 0.0, ss_x = 0.0;
    const double xbar = sx / nd;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(samples.eps[i]);
        const double y = std::log(samples.value[i]);
        const double r = y - slope * x - intercept;
        ss_res += r * r;
        ss_x += (x - xbar) * (x - xbar);
    }
    BoxFit out;
    out.dimension = 1.0 - slope;
    out.content = std::exp(intercept);
    out.dim_uncertainty = std::sqrt(ss_res / std::max(1.0, nd - 2.0) / ss_x);
    return out;
}

std::vector<double> regularization_ratio(double x0, int m_max, int k) {
    if (m_max > 4) throw DomainError("regularization_ratio: m_max above 4 is ill-conditioned");
    if (k < 1) throw DomainError("regularization_ratio: k must be >= 1");
    const Germ g = Germ::model_parabolic(k, 0.0);
    const FatouCoordinate fc(g);
    const TubeSeries vc = sample_tube_continuous(fc, x0, log_grid(1e-9, 1e-4, 400));
    // pure powers m/(k+1); the rho = 0 model expansion carries no logs
    std::vector<BasisTerm> basis;
    const int top = (2 * m_max + 1) * k + k + 1;
    for (int m = 1; m <= top; ++m) basis.push_back({m / (k + 1.0), 0});
    const FitResult fit = fit_expansion(vc, basis, 1e-9, 1e-4);
    const MeromorphicFn zf = extend_model_k(k, x0, 2 * m_max + 3);
    std::vector<double> out;
    for (int m = 0; m <= m_max; ++m) {
        const Cx w(k * (1.0 - 2.0 * m) / (k + 1.0));
        double res = 0.0;
        for (const PrincipalTerm& t : zf.structure()) {
            if (std::abs(t.pole - w) < 1e-12) res = t.laurent[0].real();
        }
        const double distrib = res / (1.0 - w.real());
        // fitted coefficient at exponent (2mk+1)/(k+1)
        double fitted = 0.0;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (std::abs(basis[j].exponent - (2.0 * m * k + 1.0) / (k + 1.0)) < 1e-12)
                fitted = fit.coefficients[j];
        }
        out.push_back(fitted / distrib);
    }
    return out;
}

double hyperbolic_fourier_H(double a, double x0, double t, int K) {
    if (K < 1) throw DomainError("hyperbolic_fourier_H: K must be >= 1");
    const double L = std::log(a);
    double acc = 1.0 + (std::log(4.0) - 2.0) / L - 2.0 * std::log(x0 * (1.0 - a)) / L;
    // Fourier pairing fixed by H = F o G: the mode k multiplies
    // exp(-2 pi i k t) (checked against the closed form; the printed
    // series carries the opposite sign in the exponent).
    Cx osc = 0.0;
    for (int k = 1; k <= K; ++k) {
        const Cx sk(0.0, 2.0 * kPi * k / L);
        osc += std::exp(Cx(0.0, -2.0 * kPi * k * t)) / (sk * (1.0 - sk));
    }
    acc += -2.0 / L * 2.0 * osc.real();
    return acc;
}

double hyperbolic_fourier_tail_bound(double a, int K) {
    const double L = std::log(a);
    double bound = 0.0;
    for (int k = K + 1; k <= K + 200000; ++k) {
        const double sk = 2.0 * kPi * k / std::abs(L);
        const double term = 2.0 / std::abs(L) * 2.0 / (sk * std::sqrt(1.0 + sk * sk));
        bound += term;
        if (term < 1e-16 * bound) break;
    }
    // remaining terms: sum 2/|L| * 2/s_k^2 < integral bound
    const double skK = 2.0 * kPi * (K + 200000) / std::abs(L);
    bound += 4.0 / std::abs(L) * (1.0 / skK) * std::abs(L) / (2.0 * kPi);
    return bound;
}

double growth_probe(const MeromorphicFn& fn, double sigma, const std::vector<double>& heights) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double t : heights) {
        const double x = std::log(t);
        const double y = std::log(std::abs(fn(Cx(sigma, t))));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(heights.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace orbzeta
