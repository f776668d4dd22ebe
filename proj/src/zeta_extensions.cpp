#include <algorithm>
#include <cmath>

#include "orbzeta/zeta.hpp"

namespace orbzeta {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kCancelTol = 1e-9;

using Lx = std::complex<long double>;

Cx from_lx(Lx v) { return Cx(static_cast<double>(v.real()), static_cast<double>(v.imag())); }

const Precision kInnerPrec{1e-13, 4'000'000};

} // namespace

Cx shifted_string_W(Cx s, double a, int n) {
    Cx total = 0.0;
    for (int k = 0; k <= n; ++k) {
        Cx inner = 0.0;
        for (int i = 0; i <= k; ++i) {
            Cx inner2 = 0.0;
            for (int j = 0; j <= i; ++j) {
                inner2 += std::pow(-a, j) * complex_binomial(Cx(i), j) *
                          complex_binomial(Cx((i - k) * a), n + k - j);
            }
            inner += ((i % 2) ? -1.0 : 1.0) * complex_binomial(Cx(k), i) * inner2;
        }
        total += std::pow(Cx(-1.0 / a), k) * complex_binomial(s, k) * inner;
    }
    return std::exp(s * std::log(Cx(a))) * total;
}

MeromorphicFn extend_k1(double x0, int M) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw DomainError("extend_k1: need 0 < x0 < 1");
    if (M < 1) throw DomainError("extend_k1: M must be >= 1");
    const double X = 1.0 / x0;
    const long Jbase = std::max<long>(8, static_cast<long>(std::ceil(10.0 - X)));

    auto eval = [X, Jbase](Cx s) -> Cx {
        const long J = std::max(Jbase, static_cast<long>(std::ceil(std::abs(s.imag()) / 2.0)));
        const Lx ls(s.real(), s.imag());
        Lx partial = 0.0L;
        for (long j = 0; j < J; ++j) {
            const long double u = static_cast<long double>(j) + static_cast<long double>(X);
            partial += std::exp(-ls * (std::log(u) + std::log(u + 1.0L)));
        }
        // folded tail: sum_m binom(-s, m) zeta(2s + m, J + X)
        Cx acc = from_lx(partial);
        const double q = static_cast<double>(J) + X;
        int quiet = 0;
        for (int m = 0; m <= 400; ++m) {
            const Cx term = complex_binomial(-s, m) * hurwitz_zeta(2.0 * s + static_cast<double>(m), q, kInnerPrec);
            acc += term;
            const double mag = std::abs(term);
            if (m >= 4 && mag <= 1e-16 * std::max(1.0, std::abs(acc))) {
                if (++quiet >= 3) return acc;
            } else {
                quiet = 0;
            }
        }
        throw ConvergenceFailure("extend_k1: folded tail did not converge");
    };

    std::vector<PrincipalTerm> structure;
    for (int r = 0; r <= M; ++r) {
        PrincipalTerm t;
        t.pole = Cx((1.0 - r) / 2.0);
        t.order = 1;
        const Cx res = 0.5 * complex_binomial(-t.pole, r);
        t.laurent = {res};
        t.cancelled = std::abs(res) < kCancelTol;
        structure.push_back(t);
    }
    return MeromorphicFn(eval, -M / 2.0, M, std::move(structure), "k1");
}

MeromorphicFn extend_shifted_a_string(double a, double b, int M) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("extend_shifted_a_string: need a, b > 0");
    if (M < 0) throw DomainError("extend_shifted_a_string: M must be >= 0");
    const long J = std::max<long>(4, static_cast<long>(std::ceil(10.0 - b)));
    const int Nt = M + 28;
    const int Mt = 44;

    // c[n][m]: coefficients of h_j^n = (-1/a)^n (j+b)^{-n} sum_m c[n][m] (j+b)^{-m}
    auto table = std::make_shared<std::vector<std::vector<double>>>();
    {
        std::vector<double> base(Mt + 1);
        for (int m = 0; m <= Mt; ++m) base[m] = complex_binomial(Cx(-a), m + 2).real();
        std::vector<double> cur(Mt + 1, 0.0);
        cur[0] = 1.0;
        table->push_back(cur);
        for (int n = 1; n <= Nt; ++n) {
            std::vector<double> nxt(Mt + 1, 0.0);
            for (int i = 0; i <= Mt; ++i) {
                if (cur[i] == 0.0) continue;
                for (int m2 = 0; i + m2 <= Mt; ++m2) nxt[i + m2] += cur[i] * base[m2];
            }
            cur = nxt;
            table->push_back(cur);
        }
    }

    auto eval = [a, b, J, Nt, Mt, table](Cx s) -> Cx {
        const long Jev = std::max(J, static_cast<long>(std::ceil(std::abs(s.imag()) / 2.0)));
        const Lx ls(s.real(), s.imag());
        Lx partial = 0.0L;
        for (long j = 0; j < Jev; ++j) {
            const long double u = static_cast<long double>(j) + static_cast<long double>(b);
            const long double lj = std::pow(u, static_cast<long double>(-a)) -
                                   std::pow(u + 1.0L, static_cast<long double>(-a));
            partial += std::exp(ls * std::log(lj));
        }
        Cx acc = from_lx(partial);
        const double q = static_cast<double>(Jev) + b;
        // Extra Hurwitz values are shared across n at fixed n + m.
        std::vector<Cx> hz(static_cast<size_t>(Nt + Mt + 2));
        std::vector<bool> have(hz.size(), false);
        auto H = [&](int r) {
            if (!have[static_cast<size_t>(r)]) {
                hz[static_cast<size_t>(r)] =
                    hurwitz_zeta((a + 1.0) * s + static_cast<double>(r), q, kInnerPrec);
                have[static_cast<size_t>(r)] = true;
            }
            return hz[static_cast<size_t>(r)];
        };
        const Cx as = std::exp(s * std::log(Cx(a)));
        int quiet = 0;
        for (int n = 0; n <= Nt; ++n) {
            Cx Tn = 0.0;
            const auto& row = (*table)[static_cast<size_t>(n)];
            for (int m = 0; m <= Mt; ++m) {
                if (row[static_cast<size_t>(m)] == 0.0) continue;
                Tn += row[static_cast<size_t>(m)] * H(n + m);
            }
            const Cx term = as * complex_binomial(s, n) * std::pow(Cx(-1.0 / a), n) * Tn;
            acc += term;
            const double mag = std::abs(term);
            if (n >= 4 && mag <= 1e-16 * std::max(1.0, std::abs(acc))) {
                if (++quiet >= 3) return acc;
            } else {
                quiet = 0;
            }
        }
        return acc;
    };

    std::vector<PrincipalTerm> structure;
    for (int n = 0; n <= M; ++n) {
        PrincipalTerm t;
        t.pole = Cx((1.0 - n) / (a + 1.0));
        t.order = 1;
        const Cx res = shifted_string_W(t.pole, a, n) / (a + 1.0);
        t.laurent = {res};
        t.cancelled = std::abs(res) < kCancelTol;
        structure.push_back(t);
    }
    return MeromorphicFn(eval, -M / (a + 1.0), M, std::move(structure), "astring");
}

MeromorphicFn induced_distance_zeta(const MeromorphicFn& geo, double geo_value_at_0) {
    std::vector<PrincipalTerm> structure;
    bool zero_seen = false;
    for (const PrincipalTerm& t : geo.structure()) {
        PrincipalTerm d = t;
        if (std::abs(t.pole) < 1e-12) {
            // Merge with the prefactor pole at 0. A geometric pole at 0 with
            // residue c gives 2c/s^2 + (2v - 2c log 2)/s + ...
            zero_seen = true;
            const Cx c = t.laurent.empty() ? Cx(0.0) : t.laurent[0];
            const Cx c2 = 2.0 * c;
            const Cx c1 = 2.0 * geo_value_at_0 - c2 * std::log(2.0);
            if (std::abs(c2) < kCancelTol) {
                d.order = 1;
                d.laurent = {c1};
            } else {
                d.order = 2;
                d.laurent = {c1, c2};
            }
            d.cancelled = std::abs(c1) < kCancelTol && std::abs(c2) < kCancelTol;
        } else {
            const Cx factor = std::exp((1.0 - t.pole) * std::log(2.0)) / t.pole;
            for (Cx& c : d.laurent) c *= factor;
            d.cancelled = true;
            for (const Cx& c : d.laurent)
                if (std::abs(c) >= kCancelTol) d.cancelled = false;
        }
        structure.push_back(d);
    }
    if (!zero_seen) {
        PrincipalTerm d;
        d.pole = Cx(0.0);
        d.order = 1;
        d.laurent = {Cx(2.0 * geo_value_at_0)};
        d.cancelled = std::abs(d.laurent[0]) < kCancelTol;
        structure.push_back(d);
    }
    auto eval = [geo](Cx s) -> Cx {
        return std::exp((1.0 - s) * std::log(2.0)) / s * geo(s);
    };
    return MeromorphicFn(eval, geo.sigma_min(), geo.truncation(), std::move(structure),
                         geo.backend() + "+distance");
}

MeromorphicFn extend_model_k(int k, double x0, int M) {
    if (k < 1) throw DomainError("extend_model_k: k must be >= 1");
    const double a = 1.0 / k;
    const double b = 1.0 / (k * std::pow(x0, k));
    MeromorphicFn inner = extend_shifted_a_string(a, b, M);
    const double kd = static_cast<double>(k);
    auto geo_eval = [inner, kd](Cx s) -> Cx {
        return std::exp(-s / kd * std::log(kd)) * inner(s);
    };
    std::vector<PrincipalTerm> geo_structure = inner.structure();
    for (PrincipalTerm& t : geo_structure) {
        const Cx factor = std::exp(-t.pole / kd * std::log(kd));
        for (Cx& c : t.laurent) c *= factor;
    }
    MeromorphicFn geo(geo_eval, inner.sigma_min(), M, std::move(geo_structure), "modelk-geo");
    MeromorphicFn dist = induced_distance_zeta(geo, -b);
    return MeromorphicFn([dist](Cx s) { return dist(s); }, dist.sigma_min(), M, dist.structure(),
                         "modelk");
}

Cx tilde_Z(int k, Cx s, int n) {
    const double kd = static_cast<double>(k);
    return std::exp(-s / kd * std::log(kd)) * shifted_string_W(s, 1.0 / kd, n);
}

MeromorphicFn hyperbolic_zeta(double a, double x0) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("hyperbolic_zeta: need 0 < a < 1");
    const double L = std::log(a);
    const double B = std::log(x0 * (1.0 - a) / 2.0);
    auto eval = [a, x0](Cx s) -> Cx {
        return std::exp((1.0 - s) * std::log(2.0) + s * std::log(x0 * (1.0 - a))) /
               (s * (1.0 - std::exp(s * std::log(a))));
    };
    std::vector<PrincipalTerm> structure;
    {
        PrincipalTerm t;
        t.pole = Cx(0.0);
        t.order = 2;
        t.laurent = {Cx(1.0 - 2.0 * B / L), Cx(-2.0 / L)};
        structure.push_back(t);
    }
    for (int k = -64; k <= 64; ++k) {
        if (k == 0) continue;
        PrincipalTerm t;
        t.pole = Cx(0.0, 2.0 * kPi * k / L);
        t.order = 1;
        const Cx sk = t.pole;
        t.laurent = {-std::exp((1.0 - sk) * std::log(2.0) + sk * std::log(x0 * (1.0 - a))) /
                     (sk * L)};
        structure.push_back(t);
    }
    return MeromorphicFn(eval, -1e300, 0, std::move(structure), "hyperbolic");
}

Cx mellin_barnes_k1(double x0, Cx s, int M, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("mellin_barnes_k1: need eta in (0,1)");
    if (M < 1) throw DomainError("mellin_barnes_k1: M must be >= 1");
    if (!(s.real() > -(M - 1) / 2.0 + eta / 2.0))
        throw OutOfHalfPlane("mellin_barnes_k1: Re s outside validity half-plane");
    const double X = 1.0 / x0;
    Cx acc = 0.0;
    for (int n = 0; n < M; ++n)
        acc += complex_binomial(-s, n) * hurwitz_zeta(2.0 * s + static_cast<double>(n), X, kInnerPrec);

    // Line integral on Re z = M - eta. The integrand decays like
    // exp(-pi |Im z|) away from the real axis; the trapezoid step adapts to
    // the pole distances (Gamma(-z) poles at M-1 and M, Hurwitz pole at
    // z = 1 - 2s).
    const double c = static_cast<double>(M) - eta;
    double d = std::min(eta, 1.0 - eta);
    d = std::min(d, std::abs(1.0 - 2.0 * s.real() - c));
    if (!(d > 1e-6)) throw QuadratureFailure("mellin_barnes_k1: contour pinched by a pole");
    const double h = std::min(0.05, 0.25 * d);
    const double Y = 40.0 + 4.0 * std::abs(s.imag());
    const Cx lg_s = log_gamma(s);
    Cx integral = 0.0;
    double edge_mag = 0.0;
    const long nsteps = static_cast<long>(std::ceil(Y / h));
    for (long i = -nsteps; i <= nsteps; ++i) {
        const Cx z(c, i * h);
        const Cx w = 2.0 * s + z;
        Cx val;
        try {
            val = std::exp(log_gamma(s + z) + log_gamma(-z) - lg_s) * hurwitz_zeta(w, X, kInnerPrec);
        } catch (const PoleAt1&) {
            throw QuadratureFailure("mellin_barnes_k1: contour node hit the Hurwitz pole");
        }
        integral += val * h;
        if (std::labs(i) == nsteps) edge_mag = std::max(edge_mag, std::abs(val));
    }
    integral /= 2.0 * kPi;
    const double tail_bound = edge_mag * (2.0 / kPi);
    if (tail_bound > 1e-9 * std::max(1.0, std::abs(acc + integral)))
        throw QuadratureFailure("mellin_barnes_k1: truncation tail bound above 1e-9");
    return acc + integral;
}

} // namespace orbzeta
