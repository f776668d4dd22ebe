#ifndef ORBZETA_JET_HPP
#define ORBZETA_JET_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "orbzeta/errors.hpp"

namespace orbzeta {

// Truncated power series sum_{i=0}^{deg} c[i] x^i with fixed truncation
// degree. All operations truncate at the shorter degree of the operands.
template <class T>
struct Jet {
    std::vector<T> c;

    Jet() = default;
    explicit Jet(int deg) : c(deg + 1, T(0)) {}
    Jet(std::vector<T> coeffs) : c(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }

    static Jet constant(T v, int deg) {
        Jet r(deg);
        r.c[0] = v;
        return r;
    }
    static Jet identity(int deg) {
        Jet r(deg);
        if (deg >= 1) r.c[1] = T(1);
        return r;
    }

    T operator[](int i) const { return (i >= 0 && i <= degree()) ? c[i] : T(0); }

    Jet operator+(const Jet& o) const {
        Jet r(std::min(degree(), o.degree()));
        for (int i = 0; i <= r.degree(); ++i) r.c[i] = (*this)[i] + o[i];
        return r;
    }
    Jet operator-(const Jet& o) const {
        Jet r(std::min(degree(), o.degree()));
        for (int i = 0; i <= r.degree(); ++i) r.c[i] = (*this)[i] - o[i];
        return r;
    }
    Jet operator*(const Jet& o) const {
        Jet r(std::min(degree(), o.degree()));
        for (int i = 0; i <= r.degree(); ++i) {
            T acc(0);
            for (int a = 0; a <= i; ++a) acc += (*this)[a] * o[i - a];
            r.c[i] = acc;
        }
        return r;
    }
    Jet operator*(T k) const {
        Jet r = *this;
        for (auto& v : r.c) v *= k;
        return r;
    }

    Jet derivative() const {
        if (degree() <= 0) return Jet(0);
        Jet r(degree() - 1);
        for (int i = 1; i <= degree(); ++i) r.c[i - 1] = (*this)[i] * T(i);
        return r;
    }

    // Multiplicative inverse; requires c[0] != 0.
    Jet reciprocal() const {
        Jet r(degree());
        r.c[0] = T(1) / c[0];
        for (int i = 1; i <= degree(); ++i) {
            T acc(0);
            for (int a = 1; a <= i; ++a) acc += (*this)[a] * r.c[i - a];
            r.c[i] = -acc / c[0];
        }
        return r;
    }

    // log of a series with c[0] = 1: log(1+u) where u has valuation >= 1.
    Jet log_one_plus_tail() const {
        // d/dx log f = f'/f, integrate with zero constant
        Jet d = derivative() * reciprocal();
        Jet r(degree());
        r.c[0] = T(0);
        for (int i = 1; i <= degree(); ++i) r.c[i] = d[i - 1] / T(i);
        return r;
    }

    // exp of a series with c[0] = 0.
    Jet exp_tail() const {
        Jet r(degree());
        r.c[0] = T(1);
        // r' = f' r  =>  (i+1) r_{i+1} = sum_{a} (a+1) f_{a+1} r_{i-a}
        for (int i = 0; i < degree(); ++i) {
            T acc(0);
            for (int a = 0; a <= i; ++a) acc += T(a + 1) * (*this)[a + 1] * r.c[i - a];
            r.c[i + 1] = acc / T(i + 1);
        }
        return r;
    }

    T eval(T x) const {
        T acc(0);
        for (int i = degree(); i >= 0; --i) acc = acc * x + c[i];
        return acc;
    }

    // Composition (*this) o inner, valid when inner has zero constant term.
    Jet compose(const Jet& inner) const {
        const int deg = std::min(degree(), inner.degree());
        Jet r = Jet::constant((*this)[deg], deg);
        for (int i = deg - 1; i >= 0; --i) {
            r = r * inner;
            r.c[0] += (*this)[i];
        }
        return r;
    }
};

using DJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

// f^s for a series f with f(0) = 1 and complex exponent s.
inline CJet pow_series(const CJet& f, std::complex<double> s) {
    return (f.log_one_plus_tail() * s).exp_tail();
}

inline CJet to_complex_jet(const DJet& f) {
    CJet r(f.degree());
    for (int i = 0; i <= f.degree(); ++i) r.c[i] = f.c[i];
    return r;
}

} // namespace orbzeta

#endif
