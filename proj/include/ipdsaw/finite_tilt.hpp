#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ipdsaw/continuum.hpp"
#include "ipdsaw/laplace.hpp"
#include "ipdsaw/roots.hpp"

namespace ipdsaw {

namespace detail {

inline void check_gn_domain(const ModelParams& p, int n, double h, const char* op) {
    if (n < 2) throw std::domain_error(std::string("finite_tilt: ") + op + ": n must be >= 2");
    const double bound = static_cast<double>(n) * p.beta / (n - 1);
    if (!(std::abs(h) < bound))
        throw std::domain_error(std::string("finite_tilt: ") + op +
                                ": |h| must be < n*beta/(n-1)");
}

// (1/n) sum_i (c_i/2)^j L^{(j)}((h/2) c_i), c_i = 1 - (2i-1)/n.
inline double g_n_impl(const ModelParams& p, int n, double h, int order) {
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double c = 1.0 - static_cast<double>(2 * i - 1) / n;
        const double x = 0.5 * h * c;
        double term = cgf(p, x, order);
        if (order >= 1) term *= 0.5 * c;
        if (order == 2) term *= 0.5 * c;
        sum += term;
    }
    return sum / n;
}

} // namespace detail

/// Finite-n tilt objective G_n(h) = (1/n) sum_i L[(h/2)(1-(2i-1)/n)] and its
/// first derivative; the plain n-term sum is exact and cheap at this scale.
inline double g_n(const ModelParams& p, int n, double h, int order) {
    detail::check_gn_domain(p, n, h, "g_n");
    if (order != 0 && order != 1)
        throw std::invalid_argument("finite_tilt: g_n: order must be 0 or 1");
    return detail::g_n_impl(p, n, h, order);
}

/// Unique h with G_n'(h) = q, by bisection then Newton; residual < 1e-12.
inline double h_n_q(const ModelParams& p, int n, double q) {
    if (n < 2) throw std::domain_error("finite_tilt: h_n_q: n must be >= 2");
    if (!(q > 0.0)) throw std::domain_error("finite_tilt: h_n_q: q must be > 0");
    const double hi = static_cast<double>(n) * p.beta / (n - 1) * (1.0 - 1e-12);
    return bisect_then_newton([&](double h) { return detail::g_n_impl(p, n, h, 1); },
                              [&](double h) { return detail::g_n_impl(p, n, h, 2); }, 0.0, hi,
                              q, 1e-12, 1e-3, 200, "h_n_q");
}

/// Tilt exponent psi_{n,h}(a,x) = h a/n - (h/2)(1-1/n) x - n G_n(h).
inline double psi_nh(const ModelParams& p, int n, double h, long long a, long long x) {
    detail::check_gn_domain(p, n, h, "psi_nh");
    const double nn = static_cast<double>(n);
    return h * static_cast<double>(a) / nn -
           0.5 * h * (1.0 - 1.0 / nn) * static_cast<double>(x) -
           nn * detail::g_n_impl(p, n, h, 0);
}

struct GapScanRow {
    int n;
    double sup_gap;
};

/// sup over an h-grid (step 1e-3) of |G_n^{(j)} - G^{(j)}| on
/// [-beta+K, beta-K], for each requested n. Continuum values are cached per
/// grid point; parity of G / antisymmetry of G' halves the cache.
inline std::vector<GapScanRow> em_gap_scan(const ModelParams& p, const std::vector<int>& n_list,
                                           double K, int order) {
    if (!(K > 0.0) || !(K < p.beta))
        throw std::domain_error("finite_tilt: em_gap_scan: need 0 < K < beta");
    if (order != 0 && order != 1)
        throw std::invalid_argument("finite_tilt: em_gap_scan: order must be 0 or 1");
    for (int n : n_list)
        if (n < 2) throw std::domain_error("finite_tilt: em_gap_scan: all n must be >= 2");

    const double hmax = p.beta - K;
    const double step = 1e-3;
    const int m = static_cast<int>(std::floor(hmax / step + 1e-9));
    std::vector<double> grid, cont;
    grid.reserve(2 * m + 1);
    cont.reserve(2 * m + 1);
    std::vector<double> half(m + 1);
    for (int i = 0; i <= m; ++i) half[i] = big_g(p, i * step, order);
    for (int i = -m; i <= m; ++i) {
        grid.push_back(i * step);
        const double v = half[std::abs(i)];
        cont.push_back(order == 1 && i < 0 ? -v : v);
    }

    std::vector<GapScanRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double gap = std::abs(detail::g_n_impl(p, n, grid[i], order) - cont[i]);
            if (gap > sup) sup = gap;
        }
        rows.push_back({n, sup});
    }
    return rows;
}

} // namespace ipdsaw
