#ifndef ORBZETA_TUBE_HPP
#define ORBZETA_TUBE_HPP

#include <limits>
#include <vector>

#include "orbzeta/germs.hpp"

namespace orbzeta {

// First N+1 orbit points x_0 > x_1 > ... > x_N together with the gap
// sequence l_j = x_j - x_{j+1} = g(x_j).
struct Orbit {
    explicit Orbit(Germ g) : germ(std::move(g)) {}

    Germ germ;
    double x0 = 0.0;
    double cutoff = 0.0;
    std::vector<double> points;
    std::vector<double> gaps;
    enum class Stop { Cutoff, NMax } stopped_by = Stop::Cutoff;

    double eps0() const { return gaps.front() / 2.0; }
};

Orbit build_orbit(const Germ& germ, double x0, double cutoff, long n_max = 200'000'000);

// Smallest n with g(x_n) <= 2 eps; ties at eps = eps_n resolved within a
// 1e-12 relative band so that n_{eps_n} = n exactly.
long critical_index(const Orbit& orbit, double eps);

// V(eps) = x_{n_eps} + 2 eps n_eps, the inner tube length.
double tube_length(const Orbit& orbit, double eps);

// 1-periodic sawtooth: G(s) = 0 at integers, 1 - frac(s) otherwise.
double sawtooth_G(double s);

// tau_eps = Psi(g^{-1}(2 eps)) - Psi(x0).
double continuous_critical_time(const FatouCoordinate& fc, double x0, double eps);

// V^c(eps) = g^{-1}(2 eps) + 2 eps tau_eps.
double tube_length_continuous(const FatouCoordinate& fc, double x0, double eps);

struct BridgeCheck {
    double defect = 0.0;           // |n_eps - tau_eps - G(tau_eps)|
    bool near_discontinuity = false; // eps within 1e-9 of some eps_n
};
BridgeCheck bridge_check(const Orbit& orbit, const FatouCoordinate& fc, double eps);

enum class TubeKind { V, Vc, Primitive };

// One term of the model used below the sample grid: value ~ coeff * eps^exponent.
struct HeadTerm {
    double exponent = 0.5;
    double coeff = 0.0;
};

// Sampled tube data on an increasing eps grid, together with the power-law
// model used below the grid and the constant region above eps_0.
struct TubeSeries {
    std::vector<double> eps;
    std::vector<double> value;
    TubeKind kind = TubeKind::V;
    int primitive_order = 0;
    double head_exp = 0.5;   // value ~ head_coeff * eps^head_exp near 0
    double head_coeff = 0.0;
    // optional multi-term head; overrides (head_exp, head_coeff) when set
    std::vector<HeadTerm> head_terms;
    double const_value = 0.0; // value == const_value for eps >= const_from
    double const_from = std::numeric_limits<double>::infinity();
    double quad_error_estimate = 0.0;

    std::vector<HeadTerm> effective_head() const {
        if (!head_terms.empty()) return head_terms;
        return {HeadTerm{head_exp, head_coeff}};
    }
};

std::vector<double> log_grid(double lo, double hi, int per_decade);

TubeSeries sample_tube(const Orbit& orbit, const std::vector<double>& grid);
TubeSeries sample_tube_continuous(const FatouCoordinate& fc, double x0,
                                  const std::vector<double>& grid);

// Interval-union oracle: measure of U_j (x_j - eps, x_j + eps) intersected
// with [0, x0] by merging sorted intervals. The orbit must extend below eps
// so that the nucleus is fully covered.
double tube_length_union_oracle(const Orbit& orbit, double eps);

// m-fold iterated primitive by composite trapezoid on the sample grid,
// with the analytic power-law head below the grid. Throws GridTooCoarse
// when the Richardson estimate exceeds 1e-6 relative at the grid top.
TubeSeries primitive_samples(const TubeSeries& v, int m);

} // namespace orbzeta

#endif
