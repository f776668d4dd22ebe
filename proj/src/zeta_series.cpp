#include <algorithm>
#include <cmath>

#include "orbzeta/zeta.hpp"

namespace orbzeta {

namespace {

using Lx = std::complex<long double>;

Cx from_lx(Lx v) { return Cx(static_cast<double>(v.real()), static_cast<double>(v.imag())); }

} // namespace

FractalString make_string(const Orbit& orbit) {
    FractalString s(orbit.germ);
    s.x0 = orbit.x0;
    s.lengths = orbit.gaps;
    s.x_tail = orbit.germ.eval(orbit.points.back());
    if (s.lengths.size() < 8)
        throw DomainError("make_string: need at least 8 orbit gaps for tail summation");
    if (s.germ.is_parabolic()) {
        if (s.x_tail > 0.1)
            throw DomainError("make_string: orbit cutoff too large for tail summation (need <= 0.1)");
        s.fatou = std::make_shared<const FatouCoordinate>(s.germ);
        const int k = s.germ.k();
        const double a = s.germ.lead_a();
        const DJet& g = s.germ.g_jet();
        const DJet& v = s.germ.field_jet();
        const int deg = std::min(g.degree(), v.degree()) - (k + 1);
        DJet A(deg), Vs(deg);
        for (int i = 0; i <= deg; ++i) {
            A.c[i] = g[k + 1 + i] / a;
            Vs.c[i] = v[k + 1 + i] / (-a);
        }
        s.a_jet = A;           // A(0) = 1
        s.b_jet = Vs.reciprocal(); // B = 1/(1 + u_v), B(0) = 1
    }
    return s;
}

namespace {

// Tail of sum_{j >= J} l_j^s for a parabolic string by Euler-Maclaurin in
// the Fatou time: the integral becomes a jet series in the tail point,
// int_J^inf F dt = sum_i h_i x_J^{beta+i}/(beta+i) with
// h = a^{s-1} A(u)^s B(u) and beta = (k+1)(s-1)+1.
Cx parabolic_tail(const FractalString& str, Cx s, const Precision& prec, double* est_out) {
    const Germ& germ = str.germ;
    const FatouCoordinate& fc = *str.fatou;
    const int k = germ.k();
    const double a = germ.lead_a();
    const double xj = str.x_tail;

    // Integral term from the jet series.
    const CJet h = pow_series(to_complex_jet(str.a_jet), s) * to_complex_jet(str.b_jet) *
                   std::exp((s - 1.0) * std::log(Cx(a)));
    const Cx beta = (k + 1.0) * (s - 1.0) + 1.0;
    Cx integral = 0.0;
    double last_mag = 0.0;
    for (int i = 0; i <= h.degree(); ++i) {
        const Cx term = h[i] * std::exp((beta + static_cast<double>(i)) * std::log(xj)) /
                        (beta + static_cast<double>(i));
        integral += term;
        last_mag = std::abs(term);
    }

    // Correction terms F(J)/2 - B2/2! F'(J) - B4/4! F'''(J) - B6/6! F^(5)(J)
    // via a 9-point stencil; the B8 term sizes the error estimate.
    const double psi_xj = fc.psi(xj);
    auto F = [&](double dt) {
        const double x = (dt == 0.0) ? xj : fc.psi_inverse(psi_xj + dt);
        return std::exp(s * std::log(germ.gap(x)));
    };
    const double hst = 0.5;
    Cx fv[9];
    for (int i = -4; i <= 4; ++i) fv[i + 4] = F(i * hst);
    auto stencil = [&](const double (&c)[9], double denom) {
        Cx acc = 0.0;
        for (int i = 0; i < 9; ++i) acc += c[i] * fv[i];
        return acc / denom;
    };
    static const double c1[9] = {3, -32, 168, -672, 0, 672, -168, 32, -3};
    static const double c3[9] = {-7, 72, -338, 488, 0, -488, 338, -72, 7};
    static const double c5[9] = {1, -9, 26, -29, 0, 29, -26, 9, -1};
    static const double c7[9] = {-1, 6, -14, 14, 0, -14, 14, -6, 1};
    const Cx F0 = fv[4];
    const Cx F1 = stencil(c1, 840.0 * hst);
    const Cx F3 = stencil(c3, 240.0 * hst * hst * hst);
    const Cx F5 = stencil(c5, 6.0 * std::pow(hst, 5));
    const Cx F7 = stencil(c7, 2.0 * std::pow(hst, 7));

    const Cx tail = integral + 0.5 * F0 - F1 / 12.0 + F3 / 720.0 - F5 / 30240.0;
    if (est_out) *est_out = std::abs(F7) / 1209600.0 + last_mag * std::abs(xj) * 2.0;
    (void)prec;
    return tail;
}

} // namespace

Cx geometric_zeta_series(const FractalString& str, Cx s, const Precision& prec) {
    const Germ& germ = str.germ;
    if (germ.is_parabolic()) {
        const double dim = germ.k() / (germ.k() + 1.0);
        if (s.real() <= dim + 0.05)
            throw OutOfHalfPlane("geometric_zeta_series: Re s below parabolic half-plane");
    } else {
        if (s.real() <= 0.05)
            throw OutOfHalfPlane("geometric_zeta_series: Re s below hyperbolic half-plane");
    }
    const Lx ls(s.real(), s.imag());
    Lx partial = 0.0L;
    for (double l : str.lengths) partial += std::exp(ls * std::log(static_cast<long double>(l)));

    Cx tail;
    double est = 0.0;
    if (germ.kind() == Germ::Kind::Hyperbolic) {
        // l_j = x0(1-a) a^j exactly: closed-form geometric tail.
        const double a = germ.hyp_a();
        const double J = static_cast<double>(str.lengths.size());
        const Cx first = std::exp(s * std::log(str.x0 * (1.0 - a)) + s * J * std::log(a));
        tail = first / (1.0 - std::exp(s * std::log(a)));
        est = 0.0;
    } else {
        tail = parabolic_tail(str, s, prec, &est);
    }
    const Cx total = from_lx(partial) + tail;
    if (est > prec.rel_tol * std::max(std::abs(total), 1e-300))
        throw ConvergenceFailure("geometric_zeta_series: tail estimate above tolerance");
    return total;
}

Cx distance_zeta(const FractalString& str, Cx s, const Precision& prec) {
    if (std::abs(s) < 1e-12) throw PoleAtZero("distance_zeta: s = 0 is a pole of the prefactor");
    return std::exp((1.0 - s) * std::log(2.0)) / s * geometric_zeta_series(str, s, prec);
}

} // namespace orbzeta
