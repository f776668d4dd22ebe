#ifndef ORBZETA_GERMS_HPP
#define ORBZETA_GERMS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "orbzeta/errors.hpp"
#include "orbzeta/jet.hpp"

namespace orbzeta {

// Formal invariants of a parabolic germ: multiplicity k, leading
// coefficient a of x - a x^{k+1} + ..., and the residual invariant rho.
struct FormalClass {
    int k = 1;
    double a = 1.0;
    double rho = 0.0;
};

// A one-dimensional attracting germ at 0, restricted to (0, x_max].
//   ModelParabolic(k, rho): time-one map of -x^{k+1}/(1 - rho x^k) d/dx
//   JetParabolic(coeffs):   polynomial x - a x^{k+1} + sum c_i x^i
//   Hyperbolic(a):          x -> a x, 0 < a < 1
class Germ {
public:
    enum class Kind { ModelParabolic, JetParabolic, Hyperbolic };

    static Germ model_parabolic(int k, double rho);
    // coeffs[i] multiplies x^{i+1}; coeffs[0] must be 1.
    static Germ jet_parabolic(std::vector<double> coeffs);
    static Germ hyperbolic(double a);

    Kind kind() const { return kind_; }
    bool is_parabolic() const { return kind_ != Kind::Hyperbolic; }
    int k() const { return k_; }
    double rho() const { return rho_; }
    double hyp_a() const { return hyp_a_; }
    // Leading coefficient a of g = a x^{k+1} + ... (parabolic only).
    double lead_a() const { return lead_a_; }
    double x_max() const { return x_max_; }

    double eval(double x) const;
    double iterate(double x0, long n) const;
    double gap(double x) const;
    double inverse_gap(double y) const;
    // Derivative of the gap function g = id - f.
    double gap_derivative(double x) const;

    // Jets at 0 (exact for polynomial germs, Lie-series for models).
    const DJet& f_jet() const { return f_jet_; }
    const DJet& g_jet() const { return g_jet_; }
    // Jet of the embedding vector field v with f = Exp(v d/dx).id
    // (parabolic only).
    const DJet& field_jet() const { return field_jet_; }

    std::string to_string() const;
    static Germ parse(const std::string& spec);

private:
    Germ() = default;
    void check_domain(double x) const;

    Kind kind_ = Kind::ModelParabolic;
    int k_ = 1;
    double rho_ = 0.0;
    double hyp_a_ = 0.5;
    double lead_a_ = 1.0;
    double x_max_ = 0.9;
    std::vector<double> coeffs_;
    DJet f_jet_, g_jet_, field_jet_;
};

// Lie-series exponential: the map Exp(v d/dx).id truncated at jet degree.
DJet lie_exponential(const DJet& v, int deg);
// Inverse problem: recover v (valuation k+1) from f = Exp(v d/dx).id.
DJet embedding_field(const DJet& f, int k, int deg);

// Fatou coordinate Psi with Psi(f(x)) = Psi(x) + 1, strictly decreasing on
// the germ domain. Model and hyperbolic coordinates are exact; polynomial
// germs use a truncated series coordinate refined by deep iteration, with
// the Abel defect sampled at construction.
class FatouCoordinate {
public:
    // truncation_order: number of series terms of Psi beyond the leading
    // x^{-k} term (k + 1 by default); deep_threshold: iterate points below
    // this before applying the truncated coordinate.
    explicit FatouCoordinate(const Germ& germ, int truncation_order = -1,
                             double deep_threshold = 1e-3);

    const Germ& germ() const { return germ_; }

    double psi(double x) const;
    double psi_derivative(double x) const;
    double psi_inverse(double y) const;
    double continuous_iterate(double x0, double t) const;

    double abel_defect(double x) const;
    double max_abel_defect() const { return max_abel_defect_; }
    bool accuracy_warning() const { return max_abel_defect_ > 1e-8; }

private:
    double psi_trunc(double x) const;
    double psi_trunc_derivative(double x) const;

    Germ germ_;
    int truncation_order_ = 0;
    double deep_threshold_ = 1e-3;
    double max_abel_defect_ = 0.0;
    // Psi_trunc(x) = sum_i pow_coeff_[i] x^{e_min_ + i} + log_coeff_ log x
    std::vector<double> pow_coeff_;
    double log_coeff_ = 0.0;
    int e_min_ = 0;
};

// Formal class (k, a, rho); parabolic germs only.
FormalClass formal_class_of(const Germ& germ);

// Monotone scalar solve h(x) = target on (0, hi], h strictly monotone;
// bisection with a Newton polish when dh is supplied.
double solve_monotone_decreasing(const std::function<double(double)>& h, double target,
                                 double hi, double rel_tol,
                                 const std::function<double(double)>& dh = nullptr);
double solve_monotone_increasing(const std::function<double(double)>& h, double target,
                                 double hi, double rel_tol,
                                 const std::function<double(double)>& dh = nullptr);

} // namespace orbzeta

#endif
