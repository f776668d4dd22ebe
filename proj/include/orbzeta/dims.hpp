#ifndef ORBZETA_DIMS_HPP
#define ORBZETA_DIMS_HPP

#include "orbzeta/meromorphic.hpp"
#include "orbzeta/tube.hpp"
#include "orbzeta/zeta.hpp"

namespace orbzeta {

// A validated pole of a zeta extension: location, detected order, Laurent
// coefficients c_{-1}..c_{-order}, and the cancellation flag for candidate
// poles whose principal part vanishes numerically.
struct ComplexDimension {
    Cx location;
    int order = 1;
    std::vector<Cx> principal;
    bool cancelled = false;
};

// Laurent coefficients c_{-1}..c_{-order_hint} at omega by contour
// quadrature of radius min(0.1, d/2) with 128 nodes; a doubled-node pass
// must agree to 1e-9 or NonConvergent is thrown.
std::vector<Cx> residue_contour(const MeromorphicFn& fn, Cx omega, int order_hint);

// Candidate poles from fn.structure() restricted to {Re > window_left,
// |Im| <= im_window}, each validated by contour quadrature.
std::vector<ComplexDimension> complex_dimensions(const MeromorphicFn& fn, double window_left,
                                                 double im_window = 1e300);

// Tube-formula reconstruction sum_omega res(eps^{1-s}/(1-s) zeta(s), omega)
// from stored Laurent data.
double tube_formula(const std::vector<ComplexDimension>& dims, double eps);

struct RecoveredClass {
    FormalClass cls;
    double integrality_defect = 0.0;
};

// Formal class from the two leading complex dimensions: k from the
// rightmost pole location, a from its residue, rho from the s zeta_f(s)
// residue at 0 (the eps log eps coefficient).
RecoveredClass recover_formal_class(double omega1, double res1, double a_k1);

struct BoxFit {
    double dimension = 0.0;
    double content = 0.0;
    double dim_uncertainty = 0.0;
};

// Least-squares slope of log V against log eps; needs >= 3 decades.
BoxFit box_dimension_fit(const TubeSeries& samples);

struct BasisTerm {
    double exponent = 0.0;
    int log_power = 0;
};

struct FitResult {
    std::vector<BasisTerm> basis;
    std::vector<double> coefficients;
    double residual_norm = 0.0;
    double condition_number = 0.0;
    bool reliable = true;
};

// Weighted linear least squares of the samples against
// eps^exponent log^p eps terms, rows weighted by eps^{-alpha_min}.
FitResult fit_expansion(const TubeSeries& samples, const std::vector<BasisTerm>& basis,
                        double window_lo, double window_hi);

// Ratio of the fitted [eps^{(2mk+1)/(k+1)}] coefficient of V^c to the
// residue-derived distributional coefficient at the pole k(1-2m)/(k+1).
// The k = 1 ratios equal 2m+1; for k >= 2 the same value is measured and
// reported, not asserted.
std::vector<double> regularization_ratio(double x0, int m_max, int k = 1);

// Truncated Fourier series of the 1-periodic hyperbolic amplitude H.
double hyperbolic_fourier_H(double a, double x0, double t, int K);

// Analytic tail bound for the |k| > K truncation of the series above.
double hyperbolic_fourier_tail_bound(double a, int K);

// Empirical growth exponent of |fn| along the vertical line Re s = sigma:
// least-squares slope of log |fn(sigma + i t)| against log t.
double growth_probe(const MeromorphicFn& fn, double sigma, const std::vector<double>& heights);

} // namespace orbzeta

#endif
