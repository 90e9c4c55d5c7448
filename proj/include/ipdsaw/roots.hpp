#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ipdsaw {

/// Root of f(x) = target for strictly increasing f on [lo, hi]: bisection down
/// to `bisect_width`, then Newton with derivative df, keeping iterates inside
/// the current bracket. Throws after `max_iter` total iterations without
/// reaching |f(x) - target| < tol.
template <class F, class DF>
double bisect_then_newton(const F& f, const DF& df, double lo, double hi, double target,
                          double tol = 1e-12, double bisect_width = 1e-3, int max_iter = 200,
                          const char* what = "root") {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo > 0.0 || fhi < 0.0)
        throw std::runtime_error(std::string("roots: ") + what + ": target not bracketed");
    int iter = 0;
    while (hi - lo > bisect_width && iter < max_iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid) - target;
        if (fm < 0.0) { lo = mid; flo = fm; } else { hi = mid; fhi = fm; }
        ++iter;
    }
    double x = 0.5 * (lo + hi);
    while (iter < max_iter) {
        const double fx = f(x) - target;
        if (std::abs(fx) < tol) return x;
        if (fx < 0.0) lo = x; else hi = x;
        const double d = df(x);
        double next = d != 0.0 ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (next == x) return x; // bracket exhausted at machine resolution
        x = next;
        ++iter;
    }
    throw std::runtime_error(std::string("roots: ") + what + ": no convergence after " +
                             std::to_string(max_iter) + " iterations");
}

} // namespace ipdsaw
