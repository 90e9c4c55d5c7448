#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ipdsaw/laplace.hpp"
#include "ipdsaw/quadrature.hpp"
#include "ipdsaw/roots.hpp"

namespace ipdsaw {

// ---------------------------------------------------------------------------
// The area rate function lives on tilts h in (-beta, beta), and the tilt
// solving G'(h) = q approaches the boundary like beta - h ~ beta e^{-beta q}.
// Already at q ~ 18 that distance drops below one ulp of beta, so a tilt close
// to the boundary is carried as its gap d = beta - h (with log_gap as the
// authoritative parameter), and every evaluation runs in the coordinate
// w(u) = beta(1/2 - u) + d u, which never cancels.
// ---------------------------------------------------------------------------

/// A resolved tilt h = beta - gap. `h` is the rounded double (it may collapse
/// onto beta when the gap is below one ulp); `log_gap` is exact.
struct TiltPoint {
    double h;
    double gap;
    double log_gap;
};

namespace detail {

// 1/expm1(w) - 1/w, the smooth part of L' at the singular end.
inline double expm1_inv_reg(double w) {
    if (w > 0.25)
        return 1.0 / std::expm1(w) - 1.0 / w;
    const double w2 = w * w;
    return -0.5 + w * (1.0 / 12.0 +
                       w2 * (-1.0 / 720.0 +
                             w2 * (1.0 / 30240.0 +
                                   w2 * (-1.0 / 1209600.0 + w2 * (1.0 / 47900160.0)))));
}

// e^w/(e^w-1)^2 - 1/w^2, the smooth part of L''.
inline double exp_over_expm1_sq_reg(double w) {
    if (w > 0.35)
        return exp_over_expm1_sq(w) - 1.0 / (w * w);
    const double w2 = w * w;
    return -1.0 / 12.0 +
           w2 * (1.0 / 240.0 +
                 w2 * (-1.0 / 6048.0 + w2 * (1.0 / 172800.0 - w2 / 5322240.0)));
}

// -log((1-e^{-w})/w), the smooth part of L after -log(w) is removed.
inline double log1mexp_over_w_reg(double w) {
    double t; // (1-e^{-w})/w - 1
    if (w >= 0.5) {
        t = (-std::expm1(-w) - w) / w;
    } else {
        t = 0.0;
        double term = 1.0;
        for (int k = 1; k <= 24; ++k) {
            term *= -w / (k + 1);
            t += term;
            if (std::abs(term) < 1e-19) break;
        }
    }
    return -std::log1p(t);
}

// L''(x) with x expressed through w = beta/2 - x.
inline double ell2_from_w(const ModelParams& p, double w) {
    return exp_over_expm1_sq(w) + exp_over_expm1_sq(p.beta - w);
}

// Closed forms of the singular parts over u in [0, 1/2], where
// w(u) = beta/2 - h u = B + A u with A = -h, B = beta/2, w(1/2) = d/2.
//   I0 = 2 int -ln w(u) du
//   I1 = 2 int u / w(u) du
//   I2 = 2 int u^2 / w(u)^2 du
struct SingularParts {
    double i0, i1, i2;
};

inline SingularParts singular_parts(double beta, double d, double log_d) {
    const double A = -(beta - d); // = d - beta
    const double B = 0.5 * beta;
    const double log_d_over_beta = log_d - std::log(beta);
    SingularParts s;
    const double at_end = 0.5 * d * ((log_d - std::log(2.0)) - 1.0); // (d/2)(ln(d/2)-1)
    s.i0 = -(2.0 / A) * (at_end - B * (std::log(B) - 1.0));
    s.i1 = 1.0 / A - (beta / (A * A)) * log_d_over_beta;
    s.i2 = (2.0 / (A * A * A)) * (0.5 * d - beta * log_d_over_beta - beta * beta / (2.0 * d));
    return s;
}

} // namespace detail

/// G(h), G'(h) or G''(h) for a tilt given as gap d = beta - |h| (log_gap
/// exact). Away from the boundary the integrand is evaluated directly; close
/// to it (d < beta/10) the 1/w-type singular part is integrated in closed form
/// and only the smooth remainder goes through quadrature, which keeps the
/// result accurate for arbitrarily small gaps (including gaps below one ulp
/// of beta, where only log_gap carries the information).
inline double big_g_from_gap(const ModelParams& p, double gap, double log_gap, int order,
                             double quad_tol = 1e-13) {
    const double beta = p.beta;
    if (order < 0 || order > 2)
        throw std::invalid_argument("continuum: big_g: order must be 0, 1 or 2");
    if (!(gap >= 0.0) || !(gap < beta) || (gap == 0.0 && !(log_gap < 0)))
        throw std::domain_error("continuum: big_g: |h| must be < beta");
    const double h = beta - gap;
    if (h == 0.0) // exact zero tilt
        return order == 2 ? cgf_edge(p, 0.5 * beta, 2) / 12.0 : 0.0;

    const auto w_of = [beta, gap](double u) { return beta * (0.5 - u) + gap * u; };

    if (gap > 0.1 * beta) {
        // plain integrand, no singularity within reach
        switch (order) {
            case 0:
                return 2.0 * integrate([&](double u) { return cgf_edge(p, w_of(u), 0); }, 0.0,
                                       0.5, quad_tol);
            case 1:
                return 2.0 * integrate([&](double u) { return u * cgf_edge(p, w_of(u), 1); },
                                       0.0, 0.5, quad_tol);
            default:
                return 2.0 * integrate([&](double u) { return u * u * cgf_edge(p, w_of(u), 2); },
                                       0.0, 0.5, quad_tol);
        }
    }

    const auto sing = detail::singular_parts(beta, gap, log_gap);
    switch (order) {
        case 0: {
            const double cnorm = std::log1p(-std::exp(-beta)) - std::log(p.c_beta);
            const double reg = 2.0 * integrate(
                [&](double u) {
                    const double w = w_of(u);
                    return cnorm + detail::log1mexp_over_w_reg(w) -
                           std::log(-std::expm1(w - beta));
                },
                0.0, 0.5, quad_tol);
            return sing.i0 + reg;
        }
        case 1: {
            const double reg = 2.0 * integrate(
                [&](double u) {
                    const double w = w_of(u);
                    return u * (detail::expm1_inv_reg(w) - 1.0 / std::expm1(beta - w));
                },
                0.0, 0.5, quad_tol);
            return sing.i1 + reg;
        }
        default: {
            const double reg = 2.0 * integrate(
                [&](double u) {
                    const double w = w_of(u);
                    return u * u * (detail::exp_over_expm1_sq_reg(w) +
                                    detail::exp_over_expm1_sq(beta - w));
                },
                0.0, 0.5, quad_tol);
            return sing.i2 + reg;
        }
    }
}

/// G^{(order)}(h) for |h| < beta (G even, G' odd, G'' even).
inline double big_g(const ModelParams& p, double h, int order) {
    const double a = std::abs(h);
    if (!(a < p.beta))
        throw std::domain_error("continuum: big_g: |h| must be < beta (h=" +
                                std::to_string(h) + ")");
    const double gap = p.beta - a;
    double v = big_g_from_gap(p, gap, std::log(gap), order);
    if (h < 0.0 && order == 1) v = -v;
    return v;
}

/// Unique tilt with G'(h) = q for q > 0, solved in s = log(beta - h). The
/// bracket is expanded using G'(beta - e^s) ~ (log beta - s)/beta, bisected to
/// width 1e-3 and polished by Newton; residual |G'-q| < max(1e-12, 5e-15 q).
inline TiltPoint h_tilde_point(const ModelParams& p, double q) {
    if (!(q > 0.0)) throw std::domain_error("continuum: h_tilde: q must be > 0");
    const double beta = p.beta;
    const double log_beta = std::log(beta);
    const auto g1_neg = [&](double s) { return -big_g_from_gap(p, std::exp(s), s, 1); };
    double s_hi = log_beta + std::log1p(-1e-13);
    double s_lo = log_beta - beta * (q + 4.0) - 4.0;
    for (int i = 0; i < 64 && g1_neg(s_lo) > -q; ++i) s_lo -= 4.0 * beta;
    const double tol = std::max(1e-12, 5e-15 * q);
    const double s = bisect_then_newton(
        g1_neg,
        [&](double x) { return std::exp(x) * big_g_from_gap(p, std::exp(x), x, 2); }, s_lo,
        s_hi, -q, tol, 1e-3, 200, "h_tilde");
    const double gap = std::exp(s);
    return {beta - gap, gap, s};
}

/// Legendre point of the excursion-area rate function at q > 0:
/// psi = q h - G(h) at the tilt h with G'(h) = q, and psi' = h by the
/// envelope identity (the dh/dq terms cancel at the stationary tilt).
struct RateFunctionPoint {
    double q;
    double h_tilde;
    double psi;
    double psi_prime;
    double gap;     // beta - h_tilde, exact
    double log_gap; // log(gap)
};

inline RateFunctionPoint psi_tilde(const ModelParams& p, double q) {
    const TiltPoint t = h_tilde_point(p, q);
    const double g0 = big_g_from_gap(p, t.gap, t.log_gap, 0);
    return {q, t.h, q * t.h - g0, t.h, t.gap, t.log_gap};
}

inline double h_tilde(const ModelParams& p, double q) { return h_tilde_point(p, q).h; }

/// Residual of the identity L(h~/2) - q h~ - G(h~) = 0, evaluated in the gap
/// coordinate (w = gap/2 exactly) so it stays meaningful at large q.
inline double legendre_identity_residual(const ModelParams& p, double q) {
    const TiltPoint t = h_tilde_point(p, q);
    const double lhalf = cgf_edge(p, 0.5 * t.gap, 0);
    return lhalf - q * t.h - big_g_from_gap(p, t.gap, t.log_gap, 0);
}

/// vartheta(h) = m2 m0 - m1^2 with m_j = int_0^1 x^j L''[h(x-1/2)] dx.
inline double vartheta(const ModelParams& p, double h, double quad_tol = 1e-13) {
    const double a = std::abs(h);
    if (!(a < p.beta))
        throw std::domain_error("continuum: vartheta: |h| must be < beta");
    const double beta = p.beta;
    const double gap = beta - a;
    // w(x) = beta/2 - h(x-1/2), written without cancellation for either sign
    const auto w_of = [&](double x) {
        return h >= 0.0 ? beta * (1.0 - x) + gap * (x - 0.5) : beta * x + gap * (0.5 - x);
    };
    const auto ell2 = [&](double x) { return detail::ell2_from_w(p, w_of(x)); };
    const double m0 = integrate(ell2, 0.0, 1.0, quad_tol);
    const double m1 = integrate([&](double x) { return x * ell2(x); }, 0.0, 1.0, quad_tol);
    const double m2 = integrate([&](double x) { return x * x * ell2(x); }, 0.0, 1.0, quad_tol);
    return m2 * m0 - m1 * m1;
}

namespace detail {

// Escape probability at half the tilt, expm1(h)/expm1((h+beta)/2); continuous
// up to h -> beta (value -> 1), so usable for any resolved tilt.
inline double kappa_half_tilt(const ModelParams& p, const TiltPoint& t) {
    return std::expm1(t.h) / std::expm1(0.5 * (t.h + p.beta));
}

} // namespace detail

/// C_{beta,q} = kappa(h~/2)^2 / (2 pi vartheta(h~)^{1/2}).
inline double c_prefactor(const ModelParams& p, double q) {
    const TiltPoint t = h_tilde_point(p, q);
    const double k = detail::kappa_half_tilt(p, t);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return k * k / (two_pi * std::sqrt(vartheta(p, t.h)));
}

namespace detail {

inline void require_beyond_critical(const ModelParams& p, const char* op) {
    if (!(p.beta > beta_critical()))
        throw std::domain_error(std::string("continuum: ") + op +
                                ": requires beta > beta_c");
}

} // namespace detail

/// Variational objective for the horizontal extension, per monomer-scale x:
///   G~(x)  = x log(gamma_beta) - x psi(x^{-2})
///   G~'(x) = log(gamma_beta) - psi(x^{-2}) + 2 x^{-2} psi'(x^{-2})
///   G~''(x) = -2 x^{-3} psi' - 4 x^{-5} psi''  with psi''(q) = 1/G''(h~^q)
inline double g_tilde(const ModelParams& p, double x, int order) {
    detail::require_beyond_critical(p, "g_tilde");
    if (!(x > 0.0)) throw std::domain_error("continuum: g_tilde: x must be > 0");
    const double q = 1.0 / (x * x);
    const RateFunctionPoint rp = psi_tilde(p, q);
    const double log_gamma = std::log(p.gamma_beta);
    switch (order) {
        case 0:
            return x * log_gamma - x * rp.psi;
        case 1:
            return log_gamma - rp.psi + 2.0 * q * rp.psi_prime;
        case 2: {
            const double g2 = big_g_from_gap(p, rp.gap, rp.log_gap, 2);
            const double psi2 = 1.0 / g2; // 0 if G'' overflowed at a tiny gap
            const double x3 = x * x * x;
            return -2.0 * rp.psi_prime / x3 - 4.0 * psi2 / (x3 * x * x);
        }
        default:
            throw std::invalid_argument("continuum: g_tilde: order must be 0, 1 or 2");
    }
}

/// Maximizer of G~ on (0, inf): bracket (default (1e-3, 50), widened
/// geometrically if G~' has no sign change), golden-section shrink, then
/// Newton on G~' until |G~'| < 1e-10.
inline double a_beta(const ModelParams& p) {
    detail::require_beyond_critical(p, "a_beta");
    double lo = 1e-3, hi = 50.0;
    for (int i = 0; i < 12 && g_tilde(p, lo, 1) < 0.0; ++i) lo *= 0.125;
    for (int i = 0; i < 12 && g_tilde(p, hi, 1) > 0.0; ++i) hi *= 8.0;
    if (g_tilde(p, lo, 1) < 0.0 || g_tilde(p, hi, 1) > 0.0)
        throw std::runtime_error("continuum: a_beta: failed to bracket the maximizer");

    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = g_tilde(p, c, 0), fd = g_tilde(p, d, 0);
    while (b - a > 1e-3) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = g_tilde(p, c, 0);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = g_tilde(p, d, 0);
        }
    }
    double x = 0.5 * (a + b);
    for (int i = 0; i < 200; ++i) {
        const double g1 = g_tilde(p, x, 1);
        if (std::abs(g1) < 1e-10) return x;
        double next = x - g1 / g_tilde(p, x, 2);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw std::runtime_error("continuum: a_beta: Newton refinement did not converge");
}

/// Every collapsed-phase constant entering the sharp partition-function
/// asymptotics, with the prefactor assembled by two independent routes:
/// route A in closed form, route B through the bead-renewal series. A gap
/// beyond 1e-6 relative between the routes signals an implementation
/// inconsistency and raises.
struct CollapsedConstants {
    double a_beta;
    double g_tilde_max;
    double g_tilde_second;
    double c_prefactor;
    double k_circ;
    double k_hat;
    double k_bar;
    double k_beta;
    double k_beta_route_a;
    double k_beta_route_b;
};

inline CollapsedConstants k_constants(const ModelParams& p) {
    detail::require_beyond_critical(p, "k_constants");
    CollapsedConstants out{};
    out.a_beta = a_beta(p);
    const double a = out.a_beta;
    const double q = 1.0 / (a * a);
    const RateFunctionPoint rp = psi_tilde(p, q);
    out.g_tilde_max = a * std::log(p.gamma_beta) - a * rp.psi;
    out.g_tilde_second = g_tilde(p, a, 2);

    const TiltPoint t{rp.h_tilde, rp.gap, rp.log_gap};
    const double kap = detail::kappa_half_tilt(p, t);
    constexpr double two_pi = 6.283185307179586476925286766559;
    out.c_prefactor = kap * kap / (two_pi * std::sqrt(vartheta(p, rp.h_tilde)));

    const double eb = std::exp(-p.beta);
    const double root = std::sqrt(two_pi) * out.c_prefactor * std::exp(rp.psi_prime) /
                        (a * a * std::sqrt(std::abs(out.g_tilde_second)));
    out.k_circ = 2.0 * std::exp(p.beta) * root;
    out.k_hat = out.k_circ * (1.0 + eb) / (2.0 * (1.0 - eb));
    out.k_bar = out.k_circ / (1.0 - eb);

    const double denom = (1.0 + eb) * std::exp(zeta_beta(p)) -
                         std::exp(0.5 * p.beta) * (1.0 - eb);
    out.k_beta_route_a = 2.0 * root / (denom * denom);

    const DeltaCoeffs d = delta_coeffs(p);
    const double one_minus_d2 = 1.0 - d.delta2;
    out.k_beta_route_b = (out.k_bar / one_minus_d2 +
                          out.k_hat * d.delta1 / (one_minus_d2 * one_minus_d2)) /
                         (1.0 - eb);

    const double gap = std::abs(out.k_beta_route_a - out.k_beta_route_b) / out.k_beta_route_a;
    if (!(gap <= 1e-6))
        throw std::runtime_error(
            "continuum: k_constants: prefactor routes disagree (relative gap " +
            std::to_string(gap) + ")");
    out.k_beta = out.k_beta_route_a;
    return out;
}

} // namespace ipdsaw
