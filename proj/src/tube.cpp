#include "orbzeta/tube.hpp"

#include <algorithm>
#include <cmath>

namespace orbzeta {

Orbit build_orbit(const Germ& germ, double x0, double cutoff, long n_max) {
    if (!(cutoff > 0.0)) throw DomainError("build_orbit: cutoff must be positive");
    Orbit o(germ);
    o.x0 = x0;
    o.cutoff = cutoff;
    o.stopped_by = Orbit::Stop::NMax;
    const bool closed_form = (germ.kind() == Germ::Kind::ModelParabolic) ||
                             (germ.kind() == Germ::Kind::Hyperbolic);
    double x = x0;
    long idx = 0;
    while (true) {
        if (x <= cutoff) {
            o.stopped_by = Orbit::Stop::Cutoff;
            break;
        }
        o.points.push_back(x);
        if (static_cast<long>(o.points.size()) > n_max) break;
        ++idx;
        x = closed_form ? germ.iterate(x0, idx) : germ.eval(x);
    }
    if (o.points.size() < 2) throw OrbitTooShort("build_orbit: need at least two points");
    o.gaps.resize(o.points.size());
    for (size_t j = 0; j < o.points.size(); ++j) o.gaps[j] = germ.gap(o.points[j]);
    return o;
}

long critical_index(const Orbit& orbit, double eps) {
    if (!(eps > 0.0)) throw DomainError("critical_index: eps must be positive");
    const double thr = 2.0 * eps;
    if (thr < orbit.gaps.back() * (1.0 - 1e-12))
        throw OrbitTooShort("critical_index: orbit does not reach gap <= 2 eps");
    if (eps > orbit.eps0() * (1.0 + 1e-12))
        throw EpsTooLarge("critical_index: eps above eps_0 = gap(x0)/2");
    // gaps are strictly decreasing; find first index with gap <= thr (band).
    const auto it = std::partition_point(orbit.gaps.begin(), orbit.gaps.end(),
                                         [&](double g) { return g > thr * (1.0 + 1e-12); });
    return static_cast<long>(it - orbit.gaps.begin());
}

double tube_length(const Orbit& orbit, double eps) {
    const long n = critical_index(orbit, eps);
    return orbit.points[static_cast<size_t>(n)] + 2.0 * eps * static_cast<double>(n);
}

double sawtooth_G(double s) {
    if (s < 0.0) throw DomainError("sawtooth_G: s must be nonnegative");
    const double fl = std::floor(s);
    const double frac = s - fl;
    if (frac == 0.0 || frac <= 1e-12 * std::max(1.0, s)) return 0.0;
    if (1.0 - frac <= 1e-12 * std::max(1.0, s)) return 0.0;
    return 1.0 - frac;
}

double continuous_critical_time(const FatouCoordinate& fc, double x0, double eps) {
    const Germ& g = fc.germ();
    const double eps0 = g.gap(x0) / 2.0;
    if (eps > eps0 * (1.0 + 1e-12))
        throw EpsTooLarge("continuous_critical_time: eps above eps_0");
    const double y = g.inverse_gap(2.0 * eps);
    const double tau = fc.psi(y) - fc.psi(x0);
    return (tau < 0.0 && tau > -1e-9) ? 0.0 : tau;
}

double tube_length_continuous(const FatouCoordinate& fc, double x0, double eps) {
    const Germ& g = fc.germ();
    const double eps0 = g.gap(x0) / 2.0;
    if (eps > eps0 * (1.0 + 1e-12))
        throw EpsTooLarge("tube_length_continuous: eps above eps_0");
    const double y = g.inverse_gap(2.0 * eps);
    const double tau = fc.psi(y) - fc.psi(x0);
    return y + 2.0 * eps * std::max(tau, 0.0);
}

BridgeCheck bridge_check(const Orbit& orbit, const FatouCoordinate& fc, double eps) {
    BridgeCheck out;
    const long n = critical_index(orbit, eps);
    for (long m = std::max<long>(0, n - 1);
         m <= std::min<long>(static_cast<long>(orbit.gaps.size()) - 1, n + 1); ++m) {
        if (std::abs(eps - orbit.gaps[static_cast<size_t>(m)] / 2.0) <= 1e-9)
            out.near_discontinuity = true;
    }
    const double tau = continuous_critical_time(fc, orbit.x0, eps);
    out.defect = std::abs(static_cast<double>(n) - tau - sawtooth_G(tau));
    return out;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0 && hi > lo && per_decade >= 1))
        throw DomainError("log_grid: invalid parameters");
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::lround(decades * per_decade)) + 1);
    std::vector<double> g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

namespace {

double head_exponent(const Germ& g) {
    return g.is_parabolic() ? 1.0 / (g.k() + 1.0) : 1.0;
}

} // namespace

TubeSeries sample_tube(const Orbit& orbit, const std::vector<double>& grid) {
    TubeSeries s;
    s.kind = TubeKind::V;
    s.eps = grid;
    s.value.resize(grid.size());
    const double eps0 = orbit.eps0();
    for (size_t i = 0; i < grid.size(); ++i) {
        s.value[i] = (grid[i] >= eps0) ? orbit.x0 : tube_length(orbit, grid[i]);
    }
    s.const_value = orbit.x0;
    s.const_from = eps0;
    s.head_exp = head_exponent(orbit.germ);
    s.head_coeff = s.value.front() / std::pow(s.eps.front(), s.head_exp);
    return s;
}

TubeSeries sample_tube_continuous(const FatouCoordinate& fc, double x0,
                                  const std::vector<double>& grid) {
    TubeSeries s;
    s.kind = TubeKind::Vc;
    s.eps = grid;
    s.value.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        s.value[i] = tube_length_continuous(fc, x0, grid[i]);
    s.const_value = x0;
    s.const_from = fc.germ().gap(x0) / 2.0;
    s.head_exp = head_exponent(fc.germ());
    s.head_coeff = s.value.front() / std::pow(s.eps.front(), s.head_exp);
    return s;
}

namespace {

// One cumulative-trapezoid pass with an analytic power-law head:
// out(t_i) = integral_0^{t_i} in, where in ~ sum_i c_i t^{alpha_i} below the grid.
std::vector<double> cumulative_level(const std::vector<double>& t, const std::vector<double>& v,
                                     const std::vector<HeadTerm>& head, size_t stride) {
    std::vector<double> out(t.size(), 0.0);
    double acc = 0.0;
    for (const HeadTerm& ht : head)
        acc += ht.coeff * std::pow(t.front(), ht.exponent + 1.0) / (ht.exponent + 1.0);
    out[0] = acc;
    size_t prev = 0;
    for (size_t i = stride; i < t.size(); i += stride) {
        acc += 0.5 * (v[prev] + v[i]) * (t[i] - t[prev]);
        out[i] = acc;
        prev = i;
    }
    // stride did not land on the last node; close with one partial panel
    if (prev + 1 < t.size()) {
        acc += 0.5 * (v[prev] + v.back()) * (t.back() - t[prev]);
        out.back() = acc;
    }
    // fill skipped slots (coarse pass only needs matching endpoints)
    if (stride > 1) {
        for (size_t i = 1; i + 1 < t.size(); ++i)
            if (i % stride != 0) out[i] = out[i - (i % stride)];
    }
    return out;
}

} // namespace

double tube_length_union_oracle(const Orbit& orbit, double eps) {
    if (orbit.points.back() > eps)
        throw OrbitTooShort("tube_length_union_oracle: orbit must extend below eps");
    double total = 0.0;
    double cur_lo = 0.0, cur_hi = 0.0;
    bool open = false;
    for (size_t i = orbit.points.size(); i-- > 0;) {
        const double x = orbit.points[i];
        const double lo = std::max(0.0, x - eps);
        const double hi = std::min(orbit.x0, x + eps);
        if (hi <= lo) continue;
        if (!open) {
            cur_lo = lo;
            cur_hi = hi;
            open = true;
        } else if (lo <= cur_hi) {
            cur_hi = std::max(cur_hi, hi);
        } else {
            total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        }
    }
    if (open) total += cur_hi - cur_lo;
    return total;
}

TubeSeries primitive_samples(const TubeSeries& v, int m) {
    if (m < 1) throw DomainError("primitive_samples: m must be >= 1");
    if (v.kind == TubeKind::Primitive)
        throw DomainError("primitive_samples: input must be a V or Vc series");
    if (v.eps.size() < 8) throw GridTooCoarse("primitive_samples: too few samples");

    std::vector<double> fine = v.value;
    std::vector<double> coarse = v.value;
    std::vector<HeadTerm> head = v.effective_head();
    for (int level = 1; level <= m; ++level) {
        fine = cumulative_level(v.eps, fine, head, 1);
        coarse = cumulative_level(v.eps, coarse, head, 2);
        for (HeadTerm& ht : head) {
            ht.coeff /= ht.exponent + 1.0;
            ht.exponent += 1.0;
        }
    }
    const double rich = std::abs(fine.back() - coarse.back()) /
                        (3.0 * std::max(std::abs(fine.back()), 1e-300));
    if (rich > 1e-6)
        throw GridTooCoarse("primitive_samples: quadrature error estimate above 1e-6");

    TubeSeries out;
    out.kind = TubeKind::Primitive;
    out.primitive_order = m;
    out.eps = v.eps;
    out.value = std::move(fine);
    out.head_terms = head;
    out.head_exp = head.front().exponent;
    out.head_coeff = head.front().coeff;
    out.const_value = v.const_value;
    out.const_from = v.const_from;
    out.quad_error_estimate = rich;
    return out;
}

} // namespace orbzeta
