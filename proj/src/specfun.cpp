#include "orbzeta/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orbzeta {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kLogPi = 1.14472988584940017414342735135305871;

// zeta(2r) for the Bernoulli table; closed forms for the slow cases,
// direct sums once the terms decay fast enough.
double zeta_even(int two_r) {
    switch (two_r) {
        case 2: return kPi * kPi / 6.0;
        case 4: return std::pow(kPi, 4) / 90.0;
        case 6: return std::pow(kPi, 6) / 945.0;
        default: break;
    }
    double s = 1.0;
    for (int n = 2; n <= 256; ++n) {
        double t = std::pow(static_cast<double>(n), -two_r);
        s += t;
        if (t < 1e-18 * s) break;
    }
    return s;
}

} // namespace

const std::vector<double>& bernoulli_over_factorial() {
    static const std::vector<double> table = [] {
        std::vector<double> t(33, 0.0);
        for (int r = 1; r <= 32; ++r) {
            double sign = (r % 2 == 1) ? 1.0 : -1.0;
            t[r] = sign * 2.0 * zeta_even(2 * r) / std::pow(kTwoPi, 2 * r);
        }
        return t;
    }();
    return table;
}

namespace {

// One Euler-Maclaurin pass at a fixed direct-sum length J.
// Returns the value and an error estimate from the first omitted term.
// Internals run in extended precision; negative Re s makes the direct sum
// grow while the result stays small, and the extra mantissa bits absorb
// most of that cancellation.
struct EmResult {
    Cx value;
    double estimate;
};

using Lx = std::complex<long double>;

EmResult hurwitz_em(Cx s, double q, long J) {
    const auto& b2f = bernoulli_over_factorial();
    const Lx ls(s.real(), s.imag());
    Lx sum = 0.0L;
    for (long j = 0; j < J; ++j) {
        sum += std::exp(-ls * std::log(static_cast<long double>(j) + static_cast<long double>(q)));
    }
    const long double w = static_cast<long double>(J) + static_cast<long double>(q);
    const Lx lw = std::log(Lx(w));
    Lx val = sum + std::exp((1.0L - ls) * lw) / (ls - 1.0L) + 0.5L * std::exp(-ls * lw);

    Lx poch = ls;                           // (s)_{2r-1} for r = 1
    Lx wpow = std::exp(-(ls + 1.0L) * lw);  // w^{-s-2r+1} for r = 1
    const long double winv2 = 1.0L / (w * w);
    long double prev_mag = std::numeric_limits<long double>::infinity();
    double est = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= 30; ++r) {
        const Lx term = static_cast<long double>(b2f[r]) * poch * wpow;
        const long double mag = std::abs(term);
        if (mag > prev_mag) {
            // Asymptotic series turned; the best we can do is the last size.
            est = static_cast<double>(prev_mag);
            break;
        }
        val += term;
        prev_mag = mag;
        est = static_cast<double>(mag);
        if (mag <= 1e-18L * std::abs(val)) break;
        poch *= (ls + static_cast<long double>(2 * r - 1)) * (ls + static_cast<long double>(2 * r));
        wpow *= winv2;
    }
    return {Cx(static_cast<double>(val.real()), static_cast<double>(val.imag())), est};
}

} // namespace

Cx hurwitz_zeta(Cx s, double q, const Precision& prec) {
    if (!(q > 0.0)) throw DomainError("hurwitz_zeta: q must be positive");
    if (std::abs(s - 1.0) < 1e-8) throw PoleAt1("hurwitz_zeta: s within guard radius of the pole at 1");
    if (!(prec.rel_tol > 0.0 && prec.rel_tol < 1.0) || prec.max_terms < 1)
        throw DomainError("hurwitz_zeta: invalid Precision");

    long J = std::max<long>({10, static_cast<long>(std::ceil(std::abs(s.imag()))),
                             static_cast<long>(std::ceil(q))});
    for (int attempt = 0; attempt < 10; ++attempt) {
        if (J > prec.max_terms) break;
        const EmResult r = hurwitz_em(s, q, J);
        const double scale = std::max(std::abs(r.value), 1e-300);
        if (r.estimate <= prec.rel_tol * scale) return r.value;
        J *= 2;
    }
    throw ConvergenceFailure("hurwitz_zeta: Euler-Maclaurin estimate above tolerance at max_terms");
}

double hurwitz_residue_check(double q) {
    const double r = 0.25;
    const int n = 64;
    Cx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double th = kTwoPi * (k + 0.5) / n;
        const Cx z = Cx(1.0, 0.0) + r * std::exp(Cx(0.0, th));
        acc += hurwitz_zeta(z, q) * (z - 1.0);
    }
    return (acc / static_cast<double>(n)).real();
}

Cx complex_binomial(Cx s, int m) {
    if (m < 0) throw DomainError("complex_binomial: m must be nonnegative");
    if (m == 0) return 1.0;
    if (m <= 64) {
        Cx prod = 1.0;
        for (int i = 0; i < m; ++i) {
            prod *= (s - static_cast<double>(i)) / static_cast<double>(i + 1);
        }
        return prod;
    }
    // Gamma ratio for large m; integer s below m gives an exact zero.
    if (std::abs(s.imag()) == 0.0) {
        const double sr = s.real();
        if (sr == std::floor(sr) && sr >= 0.0 && sr < static_cast<double>(m)) return 0.0;
    }
    return std::exp(log_gamma(s + 1.0) - log_gamma(Cx(m + 1.0)) - log_gamma(s - static_cast<double>(m) + 1.0));
}

Cx pochhammer(Cx x, int m) {
    if (m < 0) throw DomainError("pochhammer: m must be nonnegative");
    Cx prod = 1.0;
    for (int i = 0; i < m; ++i) prod *= x + static_cast<double>(i);
    return prod;
}

namespace {

// Lanczos approximation, g = 607/128, 15 coefficients (Godfrey).
// Relative error ~1e-15 on Re z > 0.
Cx lanczos_log_gamma(Cx z) {
    static const double g = 4.7421875;
    static const double c[15] = {
        0.99999999999999709182,
        57.156235665862923517,
        -59.597960355475491248,
        14.136097974741747174,
        -0.49191381609762019978,
        0.33994649984811888699e-4,
        0.46523628927048575665e-4,
        -0.98374475304879564677e-4,
        0.15808870322491248884e-3,
        -0.21026444172410488319e-3,
        0.21743961811521264320e-3,
        -0.16431810653676389022e-3,
        0.84418223983852743293e-4,
        -0.26190838401581408670e-4,
        0.36899182659531622704e-5,
    };
    const Cx zm1 = z - 1.0;
    Cx ser = c[0];
    for (int i = 1; i < 15; ++i) ser += c[i] / (zm1 + static_cast<double>(i));
    const Cx t = zm1 + g + 0.5;
    return (zm1 + 0.5) * std::log(t) - t + 0.5 * std::log(kTwoPi) + std::log(ser);
}

// log(sin(pi z)) continued so that the reflection formula lands on the
// principal branch (Hare's method); requires Im z >= 0.
Cx log_sin_pi_upper(Cx z) {
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
    const Cx i(0.0, 1.0);
    const Cx w = std::exp(2.0 * kPi * i * z);
    return -std::log(Cx(2.0, 0.0)) + i * kPi * 0.5 - i * kPi * z + std::log(1.0 - w);
}

} // namespace

Cx log_gamma(Cx z) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        if (x <= 0.0 && x == std::floor(x))
            throw PoleAtNonpositiveInteger("log_gamma: pole at nonpositive integer");
    }
    if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z).
    return Cx(kLogPi, 0.0) - log_sin_pi_upper(z) - log_gamma(1.0 - z);
}

} // namespace orbzeta
