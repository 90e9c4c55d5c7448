#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ipdsaw {

/// Model parameters at inverse temperature beta, with the step-law normalizer
/// c_beta = (1+e^{-beta/2})/(1-e^{-beta/2}) and gamma_beta = c_beta/e^beta.
struct ModelParams {
    double beta;
    double c_beta;
    double gamma_beta;

    static ModelParams make(double beta) {
        if (!(beta > 0.0))
            throw std::domain_error("laplace: ModelParams requires beta > 0, got " +
                                    std::to_string(beta));
        const double e = std::exp(-beta / 2.0);
        const double c = (1.0 + e) / (1.0 - e);
        return {beta, c, c * std::exp(-beta)};
    }
};

/// Collapse transition point: 2*ln(x*) where x* is the unique real root of
/// X^3 - X^2 - X - 1 = 0 (Newton from x0 = 2); equivalently gamma_beta = 1.
inline double beta_critical() {
    static const double value = [] {
        double x = 2.0;
        for (int i = 0; i < 60; ++i) {
            const double f = ((x - 1.0) * x - 1.0) * x - 1.0;
            const double df = (3.0 * x - 2.0) * x - 1.0;
            const double step = f / df;
            x -= step;
            if (std::abs(step) < 1e-16 * x) break;
        }
        return 2.0 * std::log(x);
    }();
    return value;
}

/// Step law P(Z = k) = e^{-beta|k|/2} / c_beta on the integers.
inline double step_pmf(const ModelParams& p, long long k) {
    return std::exp(-p.beta * 0.5 * static_cast<double>(k < 0 ? -k : k)) / p.c_beta;
}

namespace detail {

// e^y / (e^y - 1)^2 = 1 / (4 sinh^2(y/2)), exact for all y > 0.
inline double exp_over_expm1_sq(double y) {
    const double s = std::sinh(0.5 * y);
    return 1.0 / (4.0 * s * s);
}

} // namespace detail

/// Log-moment-generating function of the step law and its derivatives,
/// evaluated in the edge coordinate w = beta/2 - h (so w in (0, beta) covers
/// h in (-beta/2, beta/2)). Writing everything in w avoids cancellation when
/// the argument sits within a few ulp of the domain boundary.
///
/// Closed forms, with a = e^{-w} and b = e^{-(beta-w)}:
///   order 0: log[(1-e^{-beta}) / (c_beta (1-a)(1-b))]
///   order 1: 1/(e^w - 1) - 1/(e^{beta-w} - 1)
///   order 2: e^w/(e^w-1)^2 + e^{beta-w}/(e^{beta-w}-1)^2
inline double cgf_edge(const ModelParams& p, double w, int order) {
    const double beta = p.beta;
    if (!(w > 0.0) || !(w < beta))
        throw std::domain_error("laplace: cgf: tilt outside (-beta/2, beta/2)");
    const double wc = beta - w;
    switch (order) {
        case 0:
            return std::log1p(-std::exp(-beta)) - std::log(p.c_beta) -
                   std::log(-std::expm1(-w)) - std::log(-std::expm1(-wc));
        case 1:
            return 1.0 / std::expm1(w) - 1.0 / std::expm1(wc);
        case 2:
            return detail::exp_over_expm1_sq(w) + detail::exp_over_expm1_sq(wc);
        default:
            throw std::invalid_argument("laplace: cgf: order must be 0, 1 or 2");
    }
}

/// L(h), L'(h) or L''(h) for |h| < beta/2.
inline double cgf(const ModelParams& p, double h, int order) {
    if (!(std::abs(h) < p.beta / 2.0))
        throw std::domain_error("laplace: cgf: |h| must be < beta/2 (beta=" +
                                std::to_string(p.beta) + ", h=" + std::to_string(h) + ")");
    return cgf_edge(p, p.beta / 2.0 - h, order);
}

/// Escape probability of the h-tilted walk: (e^{2h}-1)/(e^{h+beta/2}-1),
/// defined for 0 <= h < beta/2.
inline double kappa(const ModelParams& p, double h) {
    if (!(h >= 0.0) || !(h < p.beta / 2.0))
        throw std::domain_error("laplace: kappa: h must lie in [0, beta/2)");
    if (h == 0.0) return 0.0;
    return std::expm1(2.0 * h) / std::expm1(h + p.beta / 2.0);
}

namespace detail {

inline void require_collapsed(const ModelParams& p, const char* op) {
    if (p.beta < beta_critical() - 1e-12)
        throw std::domain_error(std::string("laplace: ") + op +
                                ": requires beta >= beta_c (collapsed phase); beta=" +
                                std::to_string(p.beta));
}

} // namespace detail

/// Unique zeta in [0, beta/2) with L(-zeta) = -log(gamma_beta):
/// arccosh(e^{-beta/2} cosh beta). Collapsed phase only.
inline double zeta_beta(const ModelParams& p) {
    detail::require_collapsed(p, "zeta_beta");
    double arg = std::exp(-p.beta / 2.0) * std::cosh(p.beta);
    if (arg < 1.0) arg = 1.0; // roundoff just above beta_c
    return std::acosh(arg);
}

/// r_beta = E[1_{X_1>0} 1_{X_rho=0} gamma^rho], in closed form
/// 1 - e^{-beta} - e^{zeta_beta - beta/2}; infinite below beta_c, so the
/// extended phase is rejected.
inline double r_beta(const ModelParams& p) {
    detail::require_collapsed(p, "r_beta");
    return -std::expm1(-p.beta) - std::exp(zeta_beta(p) - p.beta / 2.0);
}

struct DeltaCoeffs {
    double delta1;
    double delta2;
};

/// Geometric sums of the extended-bead partition series at weight e^{-beta L}:
/// delta1 = 2 e^beta r_beta / (1-e^{-beta}), delta2 = e^beta c_{2 beta} r_beta.
inline DeltaCoeffs delta_coeffs(const ModelParams& p) {
    detail::require_collapsed(p, "delta_coeffs");
    const double r = r_beta(p);
    const double eb = std::exp(p.beta);
    const double c2b = ModelParams::make(2.0 * p.beta).c_beta;
    return {2.0 * eb * r / (-std::expm1(-p.beta)), eb * c2b * r};
}

} // namespace ipdsaw
