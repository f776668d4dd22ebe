#ifndef ORBZETA_SPECFUN_HPP
#define ORBZETA_SPECFUN_HPP

#include <complex>
#include <vector>

#include "orbzeta/errors.hpp"

namespace orbzeta {

using Cx = std::complex<double>;

// Accuracy request for series/continuation evaluations.
struct Precision {
    double rel_tol = 1e-12;
    long max_terms = 4'000'000;
};

// B_{2r}/(2r)! for r = 1..32, used by Euler-Maclaurin summation.
// Precomputed once into an immutable table; safe for concurrent readers.
const std::vector<double>& bernoulli_over_factorial();

// Analytic continuation of sum_{j>=0} (j+q)^{-s} by Euler-Maclaurin.
// Pre: q > 0 and |s-1| > 1e-8 (guard radius around the pole).
Cx hurwitz_zeta(Cx s, double q, const Precision& prec = {});

// Residue of s -> hurwitz_zeta(s, q) at s = 1, contour of radius 0.25.
// Equals 1 for every q > 0; exposed as a self-check.
double hurwitz_residue_check(double q);

// Generalized binomial coefficient binom(s, m) = s(s-1)...(s-m+1)/m!.
Cx complex_binomial(Cx s, int m);

// Rising factorial (x)_m = x(x+1)...(x+m-1), (x)_0 = 1.
Cx pochhammer(Cx x, int m);

// Principal branch of log Gamma(z); Lanczos on Re z >= 1/2, reflection
// with unwinding elsewhere.
Cx log_gamma(Cx z);

} // namespace orbzeta

#endif
