#include "orbzeta/dims.hpp"

#include <algorithm>
#include <cmath>

namespace orbzeta {

namespace {

// Householder QR least squares on a dense column-major design matrix.
// Columns are pre-scaled to unit max-norm; the two-norm condition number
// comes from a one-sided Jacobi SVD of the triangular factor.
struct LeastSquares {
    std::vector<double> coefficients;
    double residual_norm = 0.0;
    double condition_number = 0.0;
};

LeastSquares solve_ls(std::vector<std::vector<double>> cols, std::vector<double> rhs) {
    const size_t m = rhs.size();
    const size_t n = cols.size();
    std::vector<double> scale(n, 1.0);
    for (size_t j = 0; j < n; ++j) {
        double mx = 0.0;
        for (double v : cols[j]) mx = std::max(mx, std::abs(v));
        if (mx == 0.0) throw IllConditioned("fit: zero basis column");
        scale[j] = mx;
        for (double& v : cols[j]) v /= mx;
    }
    // Householder
    std::vector<std::vector<double>> R(n, std::vector<double>(n, 0.0));
    for (size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (size_t i = j; i < m; ++i) nrm += cols[j][i] * cols[j][i];
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw IllConditioned("fit: rank-deficient design");
        const double alpha = (cols[j][j] >= 0.0) ? -nrm : nrm;
        std::vector<double> vhh(m, 0.0);
        for (size_t i = j; i < m; ++i) vhh[i] = cols[j][i];
        vhh[j] -= alpha;
        double vnorm2 = 0.0;
        for (size_t i = j; i < m; ++i) vnorm2 += vhh[i] * vhh[i];
        if (vnorm2 == 0.0) vnorm2 = 1.0;
        auto apply = [&](std::vector<double>& target) {
            double dot = 0.0;
            for (size_t i = j; i < m; ++i) dot += vhh[i] * target[i];
            const double f = 2.0 * dot / vnorm2;
            for (size_t i = j; i < m; ++i) target[i] -= f * vhh[i];
        };
        for (size_t jj = j; jj < n; ++jj) apply(cols[jj]);
        apply(rhs);
        for (size_t i = 0; i <= j; ++i) R[j][i] = cols[j][i];
    }
    // back substitution
    std::vector<double> x(n, 0.0);
    for (size_t j = n; j-- > 0;) {
        double acc = rhs[j];
        for (size_t jj = j + 1; jj < n; ++jj) acc -= R[jj][j] * x[jj];
        x[j] = acc / R[j][j];
    }
    double res2 = 0.0;
    for (size_t i = n; i < m; ++i) res2 += rhs[i] * rhs[i];

    // condition number of the scaled design via Jacobi SVD on R^T
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i <= j; ++i) A[j][i] = R[j][i];
    bool rotated = true;
    for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
        rotated = false;
        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (size_t i = 0; i < n; ++i) {
                    app += A[p][i] * A[p][i];
                    aqq += A[q][i] * A[q][i];
                    apq += A[p][i] * A[q][i];
                }
                if (std::abs(apq) <= 1e-30 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = ((tau >= 0) ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cth = 1.0 / std::sqrt(1.0 + t * t);
                const double sth = cth * t;
                for (size_t i = 0; i < n; ++i) {
                    const double ap = A[p][i], aq = A[q][i];
                    A[p][i] = cth * ap - sth * aq;
                    A[q][i] = sth * ap + cth * aq;
                }
            }
        }
    }
    double smax = 0.0, smin = 1e300;
    for (size_t p = 0; p < n; ++p) {
        double nr = 0.0;
        for (size_t i = 0; i < n; ++i) nr += A[p][i] * A[p][i];
        nr = std::sqrt(nr);
        smax = std::max(smax, nr);
        smin = std::min(smin, nr);
    }
    LeastSquares out;
    out.coefficients.resize(n);
    for (size_t j = 0; j < n; ++j) out.coefficients[j] = x[j] / scale[j];
    out.residual_norm = std::sqrt(res2);
    out.condition_number = (smin > 0.0) ? smax / smin : 1e300;
    return out;
}

} // namespace

FitResult fit_expansion(const TubeSeries& samples, const std::vector<BasisTerm>& basis,
                        double window_lo, double window_hi) {
    if (basis.empty()) throw DomainError("fit_expansion: empty basis");
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j)
            if (basis[i].exponent == basis[j].exponent && basis[i].log_power == basis[j].log_power)
                throw DomainError("fit_expansion: duplicate basis term");
    double alpha_min = basis.front().exponent;
    for (const BasisTerm& b : basis) alpha_min = std::min(alpha_min, b.exponent);

    std::vector<size_t> idx;
    for (size_t i = 0; i < samples.eps.size(); ++i)
        if (samples.eps[i] >= window_lo && samples.eps[i] <= window_hi) idx.push_back(i);
    if (idx.size() < basis.size() + 2)
        throw InsufficientRange("fit_expansion: too few samples in the window");

    std::vector<std::vector<double>> cols(basis.size(), std::vector<double>(idx.size()));
    std::vector<double> rhs(idx.size());
    for (size_t r = 0; r < idx.size(); ++r) {
        const double e = samples.eps[idx[r]];
        const double wgt = std::pow(e, -alpha_min);
        rhs[r] = samples.value[idx[r]] * wgt;
        const double le = std::log(e);
        for (size_t j = 0; j < basis.size(); ++j) {
            cols[j][r] = std::pow(e, basis[j].exponent - alpha_min) *
                         std::pow(le, basis[j].log_power);
        }
    }
    const LeastSquares ls = solve_ls(std::move(cols), std::move(rhs));
    FitResult out;
    out.basis = basis;
    out.coefficients = ls.coefficients;
    out.residual_norm = ls.residual_norm;
    out.condition_number = ls.condition_number;
    out.reliable = ls.condition_number < 1e12;
    return out;
}

} // namespace orbzeta
