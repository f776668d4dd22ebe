#ifndef ORBZETA_ZETA_HPP
#define ORBZETA_ZETA_HPP

#include <memory>

#include "orbzeta/meromorphic.hpp"
#include "orbzeta/tube.hpp"

namespace orbzeta {

// Gap sequence of an orbit together with the machinery needed to sum the
// tail of sum_j l_j^s to high accuracy: the Fatou coordinate for parabolic
// germs (Euler-Maclaurin in the flow time) and the series jets of
// g(u)^s / |v(u)| around 0.
struct FractalString {
    explicit FractalString(Germ g) : germ(std::move(g)) {}

    Germ germ;
    double x0 = 0.0;
    std::vector<double> lengths;
    double x_tail = 0.0; // orbit point at index lengths.size()
    std::shared_ptr<const FatouCoordinate> fatou;
    DJet a_jet; // g(u) / (a u^{k+1}), equals 1 at 0
    DJet b_jet; // -Psi'(u) a u^{k+1}, equals 1 at 0
};

FractalString make_string(const Orbit& orbit);

// Convergent evaluation of zeta_L(s) = sum_j l_j^s. Validity: Re s >
// k/(k+1) + 0.05 (parabolic) or Re s > 0.05 (hyperbolic).
Cx geometric_zeta_series(const FractalString& str, Cx s, const Precision& prec = {});

// zeta_f(s) = 2^{1-s}/s * zeta_L(s).
Cx distance_zeta(const FractalString& str, Cx s, const Precision& prec = {});

// Entire coefficient functions W(s, a, n) of the shifted a-string
// decomposition (finite triple sum); W(s, a, 0) = a^s.
Cx shifted_string_W(Cx s, double a, int n);

// Meromorphic extension of the k = 1 model geometric zeta function:
// sum_m binom(-s, m) zeta(2s + m, 1/x0) arranged as a convergent evaluator
// on all of C; declared validity half-plane {Re s > -M/2}.
MeromorphicFn extend_k1(double x0, int M);

// Meromorphic extension of the shifted a-string geometric zeta; declared
// validity {Re s > -M/(a+1)}; candidate poles (1-n)/(a+1) with residues
// W(omega_n, a, n)/(a+1).
MeromorphicFn extend_shifted_a_string(double a, double b, int M);

// Distance zeta induced from a geometric zeta: 2^{1-s}/s * geo(s), with
// restructured principal parts. geo_value_at_0 is the regular value (or
// finite part) of the geometric zeta at s = 0.
MeromorphicFn induced_distance_zeta(const MeromorphicFn& geo, double geo_value_at_0);

// Distance zeta extension of the model orbit (k, rho = 0):
// 2^{1-s}/s k^{-s/k} zeta_{L_{1/k, 1/(k x0^k)}}(s).
MeromorphicFn extend_model_k(int k, double x0, int M);

// Coefficient functions tilde_Z_k(s, n) = k^{-s/k} W(s, 1/k, n).
Cx tilde_Z(int k, Cx s, int n);

// Closed-form distance zeta of the hyperbolic orbit, meromorphic on C.
MeromorphicFn hyperbolic_zeta(double a, double x0);

// Mellin-Barnes evaluation of the k = 1 model geometric zeta:
// sum_{n<M} binom(-s,n) zeta(2s+n, 1/x0) + line integral on Re z = M - eta.
Cx mellin_barnes_k1(double x0, Cx s, int M, double eta);

// Tube zeta by quadrature over tube samples (N = 1):
// zeta~(s) = int_0^delta t^{s-2} V(t) dt.
Cx tube_zeta_numeric(const TubeSeries& v, Cx s, double delta);

// Tube zeta routed through the m-th primitive (functional equation of the
// iterated primitives):
//   sum_{n=1}^m (N-s+1)_{n-1} delta^{s-N-n} V^{[n]}(delta)
//   + (N-s+1)_m int_0^delta t^{s-N-1-m} V^{[m]}(t) dt.
// prims[n-1] must hold V^{[n]}; the head terms carried by the series extend
// the integral below the grid by analytic continuation.
Cx tube_zeta_via_primitives(const std::vector<TubeSeries>& prims, Cx s, double delta);

// Principal-part constructor from a tube-function expansion
// V^{[m]}(eps) = sum_i eps^{alpha_i + m} M_i P_{n_i}(-log eps) + O(...).
struct ExpansionTerm {
    double alpha = 0.0;
    double amplitude = 0.0;        // M_i
    std::vector<double> poly = {1.0}; // monic P coefficients, ascending
};
struct ExpansionTermList {
    std::vector<ExpansionTerm> terms;
    int m = 0;
    double delta = 1.0;
    int N = 1;
};

// (N-s)_{m+1} sum_i delta^{s-N+alpha_i} sum_j M_i P^{(j)}(-log delta) /
// (s-N+alpha_i)^{j+1}; remainder left abstract (principal parts only).
MeromorphicFn expansion_zeta(const ExpansionTermList& terms);

} // namespace orbzeta

#endif
