#include "orbzeta/germs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace orbzeta {

namespace {

// f(x) = x * exp(-log1p(n k x^k)/k), the n-th iterate of the rho = 0 model.
double model0_iterate(int k, double x, double n) {
    const double w = n * k * std::pow(x, k);
    return x * std::exp(-std::log1p(w) / k);
}

// g(x) = x - f(x) for the rho = 0 model, stable near 0.
double model0_gap(int k, double x) {
    if (k == 1) return x * x / (1.0 + x);
    const double w = k * std::pow(x, k);
    return x * (-std::expm1(-std::log1p(w) / k));
}

} // namespace

double solve_monotone_decreasing(const std::function<double(double)>& h, double target,
                                 double hi, double rel_tol,
                                 const std::function<double(double)>& dh) {
    if (h(hi) > target) throw OutOfRange("solve_monotone_decreasing: target below range");
    double lo = hi * 0.5;
    int guard = 0;
    while (h(lo) < target) {
        lo *= 0.5;
        if (++guard > 400) throw ConvergenceFailure("solve_monotone_decreasing: no bracket");
    }
    // Safeguarded Newton (bisection fallback).
    double a = lo, b = hi;
    double x = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const double fx = h(x) - target;
        if (fx > 0.0) a = x; else b = x;
        double xn = 0.0;
        bool newton_ok = false;
        if (dh) {
            const double d = dh(x);
            if (d != 0.0) {
                xn = x - fx / d;
                newton_ok = (xn > a && xn < b);
            }
        }
        if (!newton_ok) xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= rel_tol * std::abs(xn)) return xn;
        x = xn;
        if ((b - a) <= rel_tol * a) return 0.5 * (a + b);
    }
    return x;
}

double solve_monotone_increasing(const std::function<double(double)>& h, double target,
                                 double hi, double rel_tol,
                                 const std::function<double(double)>& dh) {
    return solve_monotone_decreasing([&](double x) { return -h(x); }, -target, hi, rel_tol,
                                     dh ? std::function<double(double)>([&](double x) { return -dh(x); })
                                        : std::function<double(double)>());
}

DJet lie_exponential(const DJet& v, int deg) {
    DJet F = DJet::identity(deg);
    DJet w(deg);
    for (int i = 0; i <= std::min(deg, v.degree()); ++i) w.c[i] = v[i];
    double fact = 1.0;
    for (int n = 1; n <= deg + 1; ++n) {
        fact *= n;
        bool nonzero = false;
        for (const double& cv : w.c)
            if (cv != 0.0) { nonzero = true; break; }
        if (!nonzero) break;
        F = F + w * (1.0 / fact);
        w = [&] {
            DJet d = w.derivative();
            DJet vd(deg);
            for (int i = 0; i <= deg; ++i) {
                double acc = 0.0;
                for (int aidx = 0; aidx <= i && aidx <= v.degree(); ++aidx)
                    acc += v[aidx] * d[i - aidx];
                vd.c[i] = acc;
            }
            return vd;
        }();
    }
    return F;
}

DJet embedding_field(const DJet& f, int k, int deg) {
    DJet v(deg);
    for (int m = k + 1; m <= deg; ++m) {
        const DJet F = lie_exponential(v, m);
        v.c[m] = f[m] - F[m];
    }
    return v;
}

Germ Germ::model_parabolic(int k, double rho) {
    if (k < 1) throw DomainError("model_parabolic: k must be >= 1");
    Germ g;
    g.kind_ = Kind::ModelParabolic;
    g.k_ = k;
    g.rho_ = rho;
    g.lead_a_ = 1.0;
    g.x_max_ = (rho > 0.0) ? std::min(0.9, 0.5 * std::pow(rho, -1.0 / k)) : 0.9;
    const int deg = k + 22;
    DJet v(deg);
    // v = -x^{k+1} (1 + rho x^k + rho^2 x^{2k} + ...)
    double p = 1.0;
    for (int m = 0; k + 1 + m * k <= deg; ++m) {
        v.c[k + 1 + m * k] = -p;
        p *= rho;
    }
    g.field_jet_ = v;
    g.f_jet_ = lie_exponential(v, deg);
    g.g_jet_ = DJet::identity(deg) - g.f_jet_;
    return g;
}

Germ Germ::jet_parabolic(std::vector<double> coeffs) {
    if (coeffs.empty() || coeffs[0] != 1.0)
        throw DomainError("jet_parabolic: leading coefficient of x must be 1");
    int k = 0;
    for (size_t i = 1; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0.0) { k = static_cast<int>(i); break; }
    }
    if (k == 0) throw DomainError("jet_parabolic: germ must differ from the identity");
    if (coeffs[k] >= 0.0)
        throw DomainError("jet_parabolic: leading correction must be negative (attracting)");
    Germ g;
    g.kind_ = Kind::JetParabolic;
    g.k_ = k;
    g.lead_a_ = -coeffs[k];
    g.coeffs_ = std::move(coeffs);
    const int df = static_cast<int>(g.coeffs_.size());
    const int deg = std::max(df, 2 * k + 6) + k + 22;
    DJet f(deg);
    for (int i = 0; i < df; ++i) f.c[i + 1] = g.coeffs_[i];
    g.f_jet_ = f;
    g.g_jet_ = DJet::identity(deg) - f;
    g.field_jet_ = embedding_field(f, k, deg);
    // Largest x with 0 < f(x) < x and f increasing, scanned on a grid.
    double xm = 0.7;
    auto ok = [&](double cap) {
        for (int i = 1; i <= 240; ++i) {
            const double x = cap * i / 240.0;
            const double fx = f.eval(x);
            const double dfx = f.derivative().eval(x);
            if (!(fx > 0.0 && fx < x && dfx > 0.0)) return false;
        }
        return true;
    };
    while (xm > 1e-3 && !ok(xm)) xm *= 0.85;
    if (xm <= 1e-3) throw DomainError("jet_parabolic: no usable attracting interval");
    g.x_max_ = xm;
    g.rho_ = formal_class_of(g).rho;
    return g;
}

Germ Germ::hyperbolic(double a) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("hyperbolic: need 0 < a < 1");
    Germ g;
    g.kind_ = Kind::Hyperbolic;
    g.hyp_a_ = a;
    g.x_max_ = 1.0;
    g.lead_a_ = 1.0 - a; // leading coefficient of g(x) = (1-a) x
    DJet f(3);
    f.c[1] = a;
    g.f_jet_ = f;
    g.g_jet_ = DJet::identity(3) - f;
    DJet v(3);
    v.c[1] = std::log(a);
    g.field_jet_ = v;
    return g;
}

void Germ::check_domain(double x) const {
    if (!(x > 0.0 && x <= x_max_))
        throw DomainError("germ: x outside (0, x_max]");
}

double Germ::eval(double x) const {
    check_domain(x);
    switch (kind_) {
        case Kind::Hyperbolic:
            return hyp_a_ * x;
        case Kind::JetParabolic: {
            double inner = 0.0;
            for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
                inner = inner * x + coeffs_[i];
            return x * inner;
        }
        case Kind::ModelParabolic: {
            if (rho_ == 0.0) return model0_iterate(k_, x, 1.0);
            // Newton inversion of Psi at Psi(x) + 1.
            const double target = 1.0 / (k_ * std::pow(x, k_)) + rho_ * std::log(x) + 1.0;
            auto psi = [&](double y) { return 1.0 / (k_ * std::pow(y, k_)) + rho_ * std::log(y); };
            auto dpsi = [&](double y) { return -(1.0 - rho_ * std::pow(y, k_)) / std::pow(y, k_ + 1); };
            double y = model0_iterate(k_, x, 1.0);
            for (int it = 0; it < 50; ++it) {
                const double step = (psi(y) - target) / dpsi(y);
                double yn = y - step;
                if (!(yn > 0.0 && yn < x)) yn = 0.5 * (y + ((step > 0.0) ? x : 0.0));
                if (std::abs(yn - y) <= 1e-14 * yn) return yn;
                y = yn;
            }
            // Bisection fallback on the monotone branch.
            return solve_monotone_decreasing(psi, target, x, 1e-13, dpsi);
        }
    }
    throw NumericsError("germ: unreachable");
}

double Germ::iterate(double x0, long n) const {
    if (n < 0) throw DomainError("iterate: n must be nonnegative");
    if (n == 0) { check_domain(x0); return x0; }
    switch (kind_) {
        case Kind::Hyperbolic:
            check_domain(x0);
            return x0 * std::exp(static_cast<double>(n) * std::log(hyp_a_));
        case Kind::ModelParabolic: {
            check_domain(x0);
            if (rho_ == 0.0) return model0_iterate(k_, x0, static_cast<double>(n));
            const double target =
                1.0 / (k_ * std::pow(x0, k_)) + rho_ * std::log(x0) + static_cast<double>(n);
            auto psi = [&](double y) { return 1.0 / (k_ * std::pow(y, k_)) + rho_ * std::log(y); };
            auto dpsi = [&](double y) { return -(1.0 - rho_ * std::pow(y, k_)) / std::pow(y, k_ + 1); };
            double y = model0_iterate(k_, x0, static_cast<double>(n));
            for (int it = 0; it < 50; ++it) {
                const double step = (psi(y) - target) / dpsi(y);
                double yn = y - step;
                if (!(yn > 0.0 && yn <= x0)) yn = 0.5 * y;
                if (std::abs(yn - y) <= 1e-14 * yn) return yn;
                y = yn;
            }
            return solve_monotone_decreasing(psi, target, x0, 1e-13, dpsi);
        }
        case Kind::JetParabolic: {
            double x = x0;
            for (long i = 0; i < n; ++i) x = eval(x);
            return x;
        }
    }
    throw NumericsError("germ: unreachable");
}

double Germ::gap(double x) const {
    check_domain(x);
    switch (kind_) {
        case Kind::Hyperbolic:
            return (1.0 - hyp_a_) * x;
        case Kind::JetParabolic: {
            // g = -sum_{i>=2} coeffs[i-1] x^i, exact polynomial.
            double inner = 0.0;
            for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 1; --i)
                inner = inner * x - coeffs_[i];
            return inner * x * x;
        }
        case Kind::ModelParabolic:
            if (rho_ == 0.0) return model0_gap(k_, x);
            if (x < 0.02) return g_jet_.eval(x);
            return x - eval(x);
    }
    throw NumericsError("germ: unreachable");
}

double Germ::gap_derivative(double x) const {
    check_domain(x);
    switch (kind_) {
        case Kind::Hyperbolic:
            return 1.0 - hyp_a_;
        case Kind::JetParabolic: {
            DJet d = g_jet_.derivative();
            return d.eval(x);
        }
        case Kind::ModelParabolic: {
            if (rho_ == 0.0)
                return 1.0 - std::pow(1.0 + k_ * std::pow(x, k_), -(k_ + 1.0) / k_);
            if (x < 0.02) return g_jet_.derivative().eval(x);
            // f' = Psi'(x)/Psi'(f(x)) from the Abel equation.
            const double fx = eval(x);
            auto dpsi = [&](double y) { return -(1.0 - rho_ * std::pow(y, k_)) / std::pow(y, k_ + 1); };
            return 1.0 - dpsi(x) / dpsi(fx);
        }
    }
    throw NumericsError("germ: unreachable");
}

double Germ::inverse_gap(double y) const {
    if (!(y > 0.0)) throw OutOfRange("inverse_gap: y must be positive");
    const double top = gap(x_max_);
    if (y > top * (1.0 + 1e-14)) throw OutOfRange("inverse_gap: y exceeds gap at x_max");
    switch (kind_) {
        case Kind::Hyperbolic:
            return y / (1.0 - hyp_a_);
        case Kind::ModelParabolic:
            if (rho_ == 0.0 && k_ == 1) {
                // x^2/(1+x) = y has positive root x = y/2 + sqrt(y + y^2/4).
                return 0.5 * y + std::sqrt(y + 0.25 * y * y);
            }
            [[fallthrough]];
        case Kind::JetParabolic: {
            auto h = [&](double x) { return gap(x); };
            auto dh = [&](double x) { return gap_derivative(x); };
            return solve_monotone_increasing(h, std::min(y, top), x_max_, 1e-13, dh);
        }
    }
    throw NumericsError("germ: unreachable");
}

std::string Germ::to_string() const {
    char buf[64];
    std::string out;
    switch (kind_) {
        case Kind::ModelParabolic: {
            std::snprintf(buf, sizeof buf, "model:k=%d,rho=%.17g", k_, rho_);
            out = buf;
            break;
        }
        case Kind::Hyperbolic: {
            std::snprintf(buf, sizeof buf, "hyperbolic:a=%.17g", hyp_a_);
            out = buf;
            break;
        }
        case Kind::JetParabolic: {
            out = "jet:";
            for (size_t i = 0; i < coeffs_.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", coeffs_[i]);
                if (i) out += ',';
                out += buf;
            }
            break;
        }
    }
    return out;
}

Germ Germ::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("germ spec: missing ':'");
    const std::string tag = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    auto get_field = [&](const std::string& name) -> std::string {
        const auto pos = rest.find(name + "=");
        if (pos == std::string::npos) throw DomainError("germ spec: missing field " + name);
        auto end = rest.find(',', pos);
        if (end == std::string::npos) end = rest.size();
        return rest.substr(pos + name.size() + 1, end - pos - name.size() - 1);
    };
    if (tag == "model") {
        return model_parabolic(std::stoi(get_field("k")), std::stod(get_field("rho")));
    }
    if (tag == "hyperbolic") {
        return hyperbolic(std::stod(get_field("a")));
    }
    if (tag == "jet") {
        std::vector<double> cs;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) cs.push_back(std::stod(tok));
        return jet_parabolic(std::move(cs));
    }
    throw DomainError("germ spec: unknown kind '" + tag + "'");
}

FormalClass formal_class_of(const Germ& germ) {
    if (!germ.is_parabolic()) throw DomainError("formal_class_of: parabolic germs only");
    FormalClass fc;
    fc.k = germ.k();
    fc.a = germ.lead_a();
    if (germ.kind() == Germ::Kind::ModelParabolic) {
        fc.rho = germ.rho();
        return fc;
    }
    // rho is the x^{-1} coefficient of 1/v for the embedding field v.
    const DJet& v = germ.field_jet();
    const int k = germ.k();
    DJet inner(v.degree() - k - 1);
    for (int i = 0; i <= inner.degree(); ++i) inner.c[i] = v[k + 1 + i];
    const DJet r = inner.reciprocal(); // 1/v = x^{-k-1} * r(x)
    fc.rho = r[k];
    return fc;
}

FatouCoordinate::FatouCoordinate(const Germ& germ, int truncation_order, double deep_threshold)
    : germ_(germ),
      truncation_order_(truncation_order < 0 ? germ.k() + 1 : truncation_order),
      deep_threshold_(deep_threshold) {
    if (germ_.kind() == Germ::Kind::JetParabolic) {
        const int k = germ_.k();
        const int I = truncation_order_;
        const DJet& v = germ_.field_jet();
        if (v.degree() < k + 1 + I)
            throw DomainError("FatouCoordinate: germ field jet too short for truncation order");
        DJet inner(v.degree() - k - 1);
        for (int i = 0; i <= inner.degree(); ++i) inner.c[i] = v[k + 1 + i];
        const DJet r = inner.reciprocal();
        // Psi' = 1/v = x^{-k-1} * r(x); integrate the first I + 1 terms.
        e_min_ = -k;
        pow_coeff_.assign(I + 1, 0.0);
        for (int i = 0; i <= I; ++i) {
            if (i == k) { log_coeff_ = r[i]; continue; }
            pow_coeff_[i] = r[i] / static_cast<double>(i - k);
        }
        // Sample the Abel defect and monotonicity across the domain.
        double prev = psi(germ_.x_max());
        for (int i = 1; i <= 40; ++i) {
            const double x = std::exp(std::log(germ_.x_max()) +
                                      (std::log(std::max(deep_threshold_ * 0.5, 1e-8)) -
                                       std::log(germ_.x_max())) *
                                          i / 40.0);
            const double cur = psi(x);
            if (cur <= prev) throw DomainError("FatouCoordinate: Psi not decreasing on sample grid");
            prev = cur;
            max_abel_defect_ = std::max(max_abel_defect_, abel_defect(x));
        }
    } else if (germ_.kind() == Germ::Kind::ModelParabolic) {
        // Exact coordinate; record the (tiny) inversion-induced defect.
        max_abel_defect_ = abel_defect(0.5 * germ_.x_max());
    }
}

double FatouCoordinate::psi_trunc(double x) const {
    double acc = log_coeff_ * std::log(x);
    for (size_t i = 0; i < pow_coeff_.size(); ++i) {
        if (pow_coeff_[i] == 0.0) continue;
        acc += pow_coeff_[i] * std::pow(x, e_min_ + static_cast<int>(i));
    }
    return acc;
}

double FatouCoordinate::psi_trunc_derivative(double x) const {
    double acc = log_coeff_ / x;
    for (size_t i = 0; i < pow_coeff_.size(); ++i) {
        if (pow_coeff_[i] == 0.0) continue;
        const double e = e_min_ + static_cast<int>(i);
        acc += pow_coeff_[i] * e * std::pow(x, e - 1.0);
    }
    return acc;
}

double FatouCoordinate::psi(double x) const {
    switch (germ_.kind()) {
        case Germ::Kind::ModelParabolic:
            return 1.0 / (germ_.k() * std::pow(x, germ_.k())) + germ_.rho() * std::log(x);
        case Germ::Kind::Hyperbolic:
            return std::log(x) / std::log(germ_.hyp_a());
        case Germ::Kind::JetParabolic: {
            long n = 0;
            double xx = x;
            while (xx >= deep_threshold_) {
                xx = germ_.eval(xx);
                if (++n > 100'000'000) throw ConvergenceFailure("psi: deep iteration stalled");
            }
            return psi_trunc(xx) - static_cast<double>(n);
        }
    }
    throw NumericsError("psi: unreachable");
}

double FatouCoordinate::psi_derivative(double x) const {
    switch (germ_.kind()) {
        case Germ::Kind::ModelParabolic:
            return -(1.0 - germ_.rho() * std::pow(x, germ_.k())) / std::pow(x, germ_.k() + 1);
        case Germ::Kind::Hyperbolic:
            return 1.0 / (x * std::log(germ_.hyp_a()));
        case Germ::Kind::JetParabolic: {
            const DJet df = germ_.f_jet().derivative();
            double xx = x;
            double chain = 1.0;
            long n = 0;
            while (xx >= deep_threshold_) {
                chain *= df.eval(xx);
                xx = germ_.eval(xx);
                if (++n > 100'000'000) throw ConvergenceFailure("psi': deep iteration stalled");
            }
            return psi_trunc_derivative(xx) * chain;
        }
    }
    throw NumericsError("psi': unreachable");
}

double FatouCoordinate::psi_inverse(double y) const {
    switch (germ_.kind()) {
        case Germ::Kind::Hyperbolic:
            return std::exp(y * std::log(germ_.hyp_a()));
        case Germ::Kind::ModelParabolic:
            if (germ_.rho() == 0.0) {
                if (!(y > 0.0)) throw OutOfRange("psi_inverse: y outside image");
                return std::pow(germ_.k() * y, -1.0 / germ_.k());
            }
            [[fallthrough]];
        case Germ::Kind::JetParabolic: {
            auto h = [&](double x) { return psi(x); };
            auto dh = [&](double x) { return psi_derivative(x); };
            return solve_monotone_decreasing(h, y, germ_.x_max(), 1e-13, dh);
        }
    }
    throw NumericsError("psi_inverse: unreachable");
}

double FatouCoordinate::continuous_iterate(double x0, double t) const {
    if (germ_.kind() == Germ::Kind::Hyperbolic)
        return x0 * std::exp(t * std::log(germ_.hyp_a()));
    return psi_inverse(psi(x0) + t);
}

double FatouCoordinate::abel_defect(double x) const {
    return std::abs(psi(germ_.eval(x)) - psi(x) - 1.0);
}

} // namespace orbzeta
