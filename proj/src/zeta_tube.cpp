#include <algorithm>
#include <cmath>

#include "orbzeta/zeta.hpp"

namespace orbzeta {

namespace {

// Power integral with removable s = 1 + e case:
// int_lo^hi t^{w-1} dt = (hi^w - lo^w)/w, log form at w ~ 0.
Cx power_integral(Cx w, double lo, double hi) {
    if (std::abs(w) < 1e-12) return Cx(std::log(hi / lo));
    return (std::exp(w * std::log(hi)) - std::exp(w * std::log(lo))) / w;
}

// Integral of t^p f(t) dt over the sample grid up to t_cut. In u = log t
// the grids produced by log_grid are uniform and the integrand becomes
// e^{(p+1)u} f(e^u), so composite Simpson applies; non-uniform grids fall
// back to the trapezoid rule. stride 2 gives the Richardson companion.
Cx weighted_quadrature(const std::vector<double>& t, const std::vector<double>& f, Cx p,
                       double t_cut, size_t stride) {
    const size_t n = t.size();
    auto w = [&](size_t i) { return std::exp((p + 1.0) * std::log(t[i])) * f[i]; };
    // index of the last node with t <= t_cut
    size_t icut = n - 1;
    if (t_cut < t.back()) {
        icut = static_cast<size_t>(
            std::upper_bound(t.begin(), t.end(), t_cut) - t.begin());
        if (icut > 0) --icut;
    }
    const double hu = std::log(t[1] / t[0]);
    bool uniform = true;
    for (size_t i = 1; i + 1 < n && uniform; i += std::max<size_t>(n / 16, 1)) {
        if (std::abs(std::log(t[i + 1] / t[i]) - hu) > 1e-9 * hu) uniform = false;
    }

    Cx acc = 0.0;
    size_t pos = 0;
    if (uniform) {
        const double H = hu * static_cast<double>(stride);
        while (pos + 2 * stride <= icut) {
            acc += (H / 3.0) * (w(pos) + 4.0 * w(pos + stride) + w(pos + 2 * stride));
            pos += 2 * stride;
        }
    }
    // trapezoid (in t) over whatever remains, including partial intervals
    double tp = t[pos];
    double fp = f[pos];
    for (size_t i = pos + 1; i < n; ++i) {
        if (t[i] >= t_cut) {
            if (t_cut > tp) {
                const double frac = (t_cut - tp) / (t[i] - tp);
                const double fcut = fp + frac * (f[i] - fp);
                acc += 0.5 * (std::exp(p * std::log(tp)) * fp +
                              std::exp(p * std::log(t_cut)) * fcut) *
                       (t_cut - tp);
            }
            return acc;
        }
        acc += 0.5 * (std::exp(p * std::log(tp)) * fp + std::exp(p * std::log(t[i])) * f[i]) *
               (t[i] - tp);
        tp = t[i];
        fp = f[i];
    }
    return acc;
}

} // namespace

Cx tube_zeta_numeric(const TubeSeries& v, Cx s, double delta) {
    if (v.kind == TubeKind::Primitive)
        throw DomainError("tube_zeta_numeric: expected a V or Vc series");
    if (v.eps.size() < 8) throw GridTooCoarse("tube_zeta_numeric: too few samples");
    const double e1 = v.eps.front();
    // head below the grid: V ~ sum_i c_i t^{alpha_i}
    Cx total = 0.0;
    for (const HeadTerm& ht : v.effective_head())
        total += ht.coeff * std::exp((s - 1.0 + ht.exponent) * std::log(e1)) /
                 (s - 1.0 + ht.exponent);
    const double t_cut = std::min(delta, v.eps.back());
    const Cx fine = weighted_quadrature(v.eps, v.value, s - 2.0, t_cut, 1);
    const Cx coarse = weighted_quadrature(v.eps, v.value, s - 2.0, t_cut, 2);
    total += fine;
    if (delta > v.eps.back()) {
        if (!(v.eps.back() >= v.const_from * 0.9999))
            throw GridTooCoarse("tube_zeta_numeric: grid must reach the constant region");
        total += v.const_value * power_integral(s - 1.0, v.eps.back(), delta);
    }
    const double est = std::abs(fine - coarse) / (7.0 * std::max(std::abs(total), 1e-300));
    if (est > 1e-8) throw GridTooCoarse("tube_zeta_numeric: quadrature estimate above 1e-8");
    return total;
}

Cx tube_zeta_via_primitives(const std::vector<TubeSeries>& prims, Cx s, double delta) {
    if (prims.empty()) throw DomainError("tube_zeta_via_primitives: no primitives supplied");
    const int m = static_cast<int>(prims.size());
    for (int n = 1; n <= m; ++n) {
        if (prims[static_cast<size_t>(n - 1)].kind != TubeKind::Primitive ||
            prims[static_cast<size_t>(n - 1)].primitive_order != n)
            throw DomainError("tube_zeta_via_primitives: prims[n-1] must be V^{[n]}");
    }
    const TubeSeries& top = prims.back();
    if (delta > top.eps.back() * (1.0 + 1e-12))
        throw GridTooCoarse("tube_zeta_via_primitives: grid must reach delta");

    auto value_at = [](const TubeSeries& ts, double t) {
        const auto it = std::lower_bound(ts.eps.begin(), ts.eps.end(), t);
        if (it == ts.eps.begin()) return ts.value.front();
        if (it == ts.eps.end()) return ts.value.back();
        const size_t i = static_cast<size_t>(it - ts.eps.begin());
        const double frac = (t - ts.eps[i - 1]) / (ts.eps[i] - ts.eps[i - 1]);
        return ts.value[i - 1] + frac * (ts.value[i] - ts.value[i - 1]);
    };

    // sum_{n=1}^m (2-s)_{n-1} delta^{s-1-n} V^{[n]}(delta)
    Cx total = 0.0;
    for (int n = 1; n <= m; ++n) {
        total += pochhammer(2.0 - s, n - 1) *
                 std::exp((s - 1.0 - static_cast<double>(n)) * std::log(delta)) *
                 value_at(prims[static_cast<size_t>(n - 1)], delta);
    }

    // (2-s)_m [ head continuation + int_{e1}^{delta} t^{s-2-m} V^{[m]} dt ]
    const double e1 = top.eps.front();
    Cx integral = 0.0;
    // stored head exponents are those of V^{[m]} (alpha_i + m)
    for (const HeadTerm& ht : top.effective_head()) {
        const Cx w = s - 1.0 - static_cast<double>(m) + ht.exponent;
        integral += ht.coeff * std::exp(w * std::log(e1)) / w;
    }
    const Cx p = s - 2.0 - static_cast<double>(m);
    const Cx fine = weighted_quadrature(top.eps, top.value, p, delta, 1);
    const Cx coarse = weighted_quadrature(top.eps, top.value, p, delta, 2);
    integral += fine;
    total += pochhammer(2.0 - s, m) * integral;
    const double est =
        std::abs(pochhammer(2.0 - s, m)) * std::abs(fine - coarse) / (7.0 * std::max(std::abs(total), 1e-300));
    if (est > 1e-6)
        throw GridTooCoarse("tube_zeta_via_primitives: quadrature estimate above 1e-6");
    return total;
}

MeromorphicFn expansion_zeta(const ExpansionTermList& terms) {
    const int N = terms.N;
    const int m = terms.m;
    const double delta = terms.delta;
    for (size_t i = 0; i < terms.terms.size(); ++i) {
        if (terms.terms[i].poly.empty() || terms.terms[i].poly.back() != 1.0)
            throw DomainError("expansion_zeta: polynomials must be monic");
        for (size_t j = i + 1; j < terms.terms.size(); ++j) {
            if (std::abs(terms.terms[i].alpha - terms.terms[j].alpha) < 1e-14)
                throw DuplicateExponent("expansion_zeta: coinciding exponents");
        }
    }
    // polynomial derivatives P^{(j)}(x0) from ascending coefficients
    auto poly_derivative_at = [](const std::vector<double>& p, int j, double x0) {
        double acc = 0.0;
        for (int i = j; i < static_cast<int>(p.size()); ++i) {
            double fall = 1.0;
            for (int r = 0; r < j; ++r) fall *= static_cast<double>(i - r);
            acc += p[static_cast<size_t>(i)] * fall * std::pow(x0, i - j);
        }
        return acc;
    };

    const double mld = -std::log(delta);
    auto tc = terms;
    auto eval = [tc, N, m, delta, mld, poly_derivative_at](Cx s) -> Cx {
        Cx acc = 0.0;
        for (const ExpansionTerm& t : tc.terms) {
            const int n = static_cast<int>(t.poly.size()) - 1;
            Cx inner = 0.0;
            for (int j = 0; j <= n; ++j) {
                inner += t.amplitude * poly_derivative_at(t.poly, j, mld) /
                         std::pow(s - static_cast<double>(N) + t.alpha, j + 1);
            }
            acc += std::exp((s - static_cast<double>(N) + t.alpha) * std::log(delta)) * inner;
        }
        return pochhammer(static_cast<double>(N) - s, m + 1) * acc;
    };

    // Laurent data at p_i = N - alpha_i by convolving the Taylor series of
    // (N-s)_{m+1} delta^{s-p} with the principal-part frame.
    std::vector<PrincipalTerm> structure;
    for (const ExpansionTerm& t : terms.terms) {
        const double p = static_cast<double>(N) - t.alpha;
        const int n = static_cast<int>(t.poly.size()) - 1;
        // (N-s)_{m+1} as a polynomial in u = s - p
        std::vector<double> poch_poly = {1.0};
        for (int r = 0; r <= m; ++r) {
            const double A = static_cast<double>(N) - p + static_cast<double>(r);
            std::vector<double> nxt(poch_poly.size() + 1, 0.0);
            for (size_t i = 0; i < poch_poly.size(); ++i) {
                nxt[i] += poch_poly[i] * A;
                nxt[i + 1] -= poch_poly[i];
            }
            poch_poly = std::move(nxt);
        }
        const int tmax = n + 1;
        std::vector<double> phi(static_cast<size_t>(tmax + 1), 0.0);
        const double ld = std::log(delta);
        for (int tt = 0; tt <= tmax; ++tt) {
            double acc = 0.0;
            double fact = 1.0;
            for (int w = 0; w <= tt; ++w) {
                if (w > 0) fact *= w;
                const int u = tt - w;
                if (u < static_cast<int>(poch_poly.size()))
                    acc += poch_poly[static_cast<size_t>(u)] * std::pow(ld, w) / fact;
            }
            phi[static_cast<size_t>(tt)] = acc;
        }
        PrincipalTerm pt;
        pt.pole = Cx(p);
        pt.order = n + 1;
        pt.laurent.assign(static_cast<size_t>(n + 1), Cx(0.0));
        for (int q = 1; q <= n + 1; ++q) {
            Cx c = 0.0;
            for (int j = q - 1; j <= n; ++j) {
                c += t.amplitude * poly_derivative_at(t.poly, j, mld) *
                     phi[static_cast<size_t>(j + 1 - q)];
            }
            pt.laurent[static_cast<size_t>(q - 1)] = c;
        }
        pt.cancelled = true;
        for (const Cx& c : pt.laurent)
            if (std::abs(c) >= 1e-9) pt.cancelled = false;
        structure.push_back(pt);
    }
    return MeromorphicFn(eval, -1e300, m, std::move(structure), "expansion(principal parts only)");
}

} // namespace orbzeta
