#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipdsaw/continuum.hpp"
#include "ipdsaw/laplace.hpp"
#include "ipdsaw/log_weight.hpp"
#include "ipdsaw/partition_dp.hpp"

namespace ipdsaw {

/// Probabilities P(V_{n,k}) of an n-step positive excursion (X_n = 0,
/// X_i > 0 in between) enclosing area exactly k, for all k <= area_cap.
/// tail_bound is an upper bound on the total probability mass discarded at
/// the height cap; area pruning is exact because the area is nondecreasing.
struct ExcursionTable {
    int n = 0;
    double beta = 0.0;
    long long area_cap = 0;
    int height_cap = 0;
    std::vector<double> probabilities; // index k
    double tail_bound = 0.0;

    double prob(long long k) const {
        return k >= 0 && k <= area_cap ? probabilities[static_cast<std::size_t>(k)] : 0.0;
    }
};

inline int default_height_cap(double beta, long long area_cap) {
    const double h = 12.0 / beta * std::sqrt(static_cast<double>(area_cap)) + 50.0;
    return static_cast<int>(std::min(static_cast<double>(area_cap), std::ceil(h)));
}

namespace detail {

// Forward sweep over (height x > 0, accumulated area a), one layer per step.
// The geometric step kernel e^{-beta|x-x'|/2} splits into an up-sweep and a
// down-sweep recursion, so a layer costs O(height * area). Layers are
// renormalized against underflow; `log_scale` carries the running exponent.
class ExcursionDP {
public:
    ExcursionDP(const ModelParams& params, long long area_cap, int height_cap,
                std::size_t mem_budget)
        : p_(params),
          area_cap_(area_cap),
          h_(height_cap),
          s_(std::exp(-params.beta / 2.0)) {
        if (area_cap < 0) throw std::invalid_argument("excursion: area_cap must be >= 0");
        if (height_cap < 1) throw std::invalid_argument("excursion: height_cap must be >= 1");
        const std::size_t cells = static_cast<std::size_t>(h_ + 1) *
                                  static_cast<std::size_t>(area_cap + 1);
        check_dp_budget(cells * 2 * sizeof(double), mem_budget, "excursion_table");
        w_.assign(cells, 0.0);
        scratch_.assign(cells, 0.0);
        // step 1: X_1 = x, area x
        for (long long x = 1; x <= std::min<long long>(h_, area_cap_); ++x)
            at(w_, x, x) = step_pmf(p_, x);
        if (h_ < area_cap_) add_tail(std::log(step_tail(h_)));
        step_index_ = 1;
    }

    int step_index() const { return step_index_; }
    double log_scale() const { return log_scale_; }
    double log_tail() const { return log_tail_; }

    // advance one step: layer i -> i+1
    void advance() {
        const long long A = area_cap_;
        const double inv_c = 1.0 / p_.c_beta;
        // height-cap loss: sum_x rowmass(x) * P(step > H - x), counted only
        // when some admissible area could still receive the overflow
        double loss = 0.0;
        for (long long a = 0; a <= A; ++a) {
            if (h_ >= A - a) continue;
            for (long long x = 1; x <= h_; ++x) loss += at(w_, x, a) * step_tail(h_ - x);
        }
        if (loss > 0.0) add_tail(std::log(loss) + log_scale_);

        std::fill(scratch_.begin(), scratch_.end(), 0.0);
        std::vector<double> up(h_ + 1), down(h_ + 2);
        for (long long a = 0; a <= A; ++a) {
            up[0] = 0.0;
            for (long long x = 1; x <= h_; ++x) up[x] = up[x - 1] * s_ + at(w_, x, a);
            down[h_ + 1] = 0.0;
            for (long long x = h_; x >= 1; --x) down[x] = down[x + 1] * s_ + at(w_, x, a);
            const long long x_hi = std::min<long long>(h_, A - a);
            for (long long x = 1; x <= x_hi; ++x) {
                const double conv = (up[x] + down[x] - at(w_, x, a)) * inv_c;
                if (conv != 0.0) at(scratch_, x, a + x) = conv;
            }
        }
        w_.swap(scratch_);
        ++step_index_;
        // rescale the layer if it drifted toward the underflow floor
        double mx = 0.0;
        for (double v : w_) mx = std::max(mx, v);
        if (mx > 0.0 && mx < 1e-100) {
            const double inv = 1.0 / mx;
            for (double& v : w_) v *= inv;
            log_scale_ += std::log(mx);
        }
    }

    // log P(V_{n,k}) with n = step_index() + 1: close the walk at height 0
    double log_prob_close(long long k) const {
        if (k < 0 || k > area_cap_) return -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (long long x = 1; x <= h_; ++x) sum += at(w_, x, k) * step_pmf(p_, x);
        return sum > 0.0 ? std::log(sum) + log_scale_
                         : -std::numeric_limits<double>::infinity();
    }

private:
    double& at(std::vector<double>& v, long long x, long long a) {
        return v[static_cast<std::size_t>(x) * (area_cap_ + 1) + a];
    }
    double at(const std::vector<double>& v, long long x, long long a) const {
        return v[static_cast<std::size_t>(x) * (area_cap_ + 1) + a];
    }
    // P(step > d) = sum_{j > d} p(j) for d >= 0
    double step_tail(long long d) const {
        return std::pow(s_, static_cast<double>(d + 1)) / (p_.c_beta * (1.0 - s_));
    }
    void add_tail(double log_mass) { log_tail_ = log_add(log_tail_, log_mass); }

    ModelParams p_;
    long long area_cap_;
    long long h_;
    double s_;
    std::vector<double> w_, scratch_;
    double log_scale_ = 0.0;
    double log_tail_ = -std::numeric_limits<double>::infinity();
    int step_index_ = 0;
};

} // namespace detail

inline ExcursionTable excursion_table(const ModelParams& params, int n, long long area_cap,
                                      int height_cap = -1,
                                      std::size_t mem_budget = dp_memory_budget()) {
    if (n < 1) throw std::invalid_argument("excursion: n must be >= 1");
    if (height_cap < 0) height_cap = default_height_cap(params.beta, std::max<long long>(area_cap, 1));
    ExcursionTable out;
    out.n = n;
    out.beta = params.beta;
    out.area_cap = area_cap;
    out.height_cap = height_cap;
    out.probabilities.assign(static_cast<std::size_t>(area_cap) + 1, 0.0);
    if (n == 1) { // the single forced step to 0
        out.probabilities[0] = step_pmf(params, 0);
        return out;
    }
    detail::ExcursionDP dp(params, area_cap, height_cap, mem_budget);
    while (dp.step_index() < n - 1) dp.advance();
    for (long long k = 0; k <= area_cap; ++k)
        out.probabilities[static_cast<std::size_t>(k)] = std::exp(dp.log_prob_close(k));
    out.tail_bound = std::exp(dp.log_tail());
    return out;
}

/// Single-bead partition value through the positive-excursion representation:
///   Z_circ(L) = e^{beta L} * 2 c_beta * sum_{N=1}^{L/2} gamma^N P(V_{N+1, L-N}).
/// One DP sweep serves every term; with the height cap at the full area no
/// excursion mass is ever pruned.
inline LogWeight walk_rep_single_bead(const ModelParams& params, int L,
                                      std::size_t mem_budget = dp_memory_budget()) {
    if (L < 2) throw std::invalid_argument("excursion: walk_rep_single_bead: L must be >= 2");
    const long long area_cap = L - 1;
    detail::ExcursionDP dp(params, area_cap, static_cast<int>(area_cap), mem_budget);
    const double log_gamma = std::log(params.gamma_beta);
    double acc = -std::numeric_limits<double>::infinity();
    for (int N = 1; N <= L / 2; ++N) {
        if (dp.step_index() < N) dp.advance();
        acc = log_add(acc, N * log_gamma + dp.log_prob_close(L - N));
    }
    return LogWeight::from_log(params.beta * L + std::log(2.0 * params.c_beta) + acc);
}

/// Local-limit ratio n^2 P(V_{n, q n^2}) e^{n psi(q)} / C_{beta,q}; the sharp
/// excursion estimate drives this to 1 as n grows. q n^2 must be an integer.
inline double llt_ratio(const ModelParams& params, int n, double q,
                        std::size_t mem_budget = dp_memory_budget()) {
    if (n < 1) throw std::invalid_argument("excursion: llt_ratio: n must be >= 1");
    if (!(q > 0.0)) throw std::domain_error("excursion: llt_ratio: q must be > 0");
    const double qn2 = q * n * n;
    const long long k = std::llround(qn2);
    if (std::abs(qn2 - static_cast<double>(k)) > 1e-9)
        throw std::invalid_argument("excursion: llt_ratio: q*n^2 must be an integer, got " +
                                    std::to_string(qn2));
    const ExcursionTable table = excursion_table(params, n, k, -1, mem_budget);
    const double p = table.prob(k);
    if (p == 0.0) return 0.0;
    const RateFunctionPoint rp = psi_tilde(params, q);
    const double log_ratio = 2.0 * std::log(static_cast<double>(n)) + std::log(p) +
                             n * rp.psi - std::log(c_prefactor(params, q));
    return std::exp(log_ratio);
}

/// log of a Chernoff bound on P(A_n >= K), with A_n the area of the n-step
/// free walk: lambda = beta/(2(n+1)) keeps every tilted increment inside the
/// cgf domain.
inline double log_area_tail_bound(const ModelParams& params, int n, double K) {
    const double lambda = params.beta / (2.0 * (n + 1));
    double log_mgf = 0.0;
    for (int j = 1; j <= n; ++j) log_mgf += cgf(params, lambda * j, 0);
    return log_mgf - lambda * K;
}

/// Upper bound on the truncation error |delta2 - sum_{L<=Lstar} hat_Z e^{-beta L}|,
/// built from the computed circ series plus a Chernoff bound on the excursion
/// area beyond Lstar.
inline double delta2_series_tail_bound(const ModelParams& params, const PartitionSeries& circ,
                                       int l_star) {
    if (circ.variant != Variant::circ || circ.l_max() < l_star)
        throw std::invalid_argument("excursion: delta2_series_tail_bound: need a circ series "
                                    "covering l_star");
    const double beta = params.beta;
    const double log_gamma = std::log(params.gamma_beta);
    // B = bound on sum_{L > Lstar} circ(L) e^{-beta L}
    double b_sum = 0.0;
    for (int N = 1; N <= l_star / 2; ++N) {
        const double t = std::min(0.0, log_area_tail_bound(params, N, l_star - N + 1));
        b_sum += std::exp(N * log_gamma + t);
    }
    const double gam = params.gamma_beta;
    b_sum += std::pow(gam, l_star / 2 + 1) / (1.0 - gam);
    const double big_b = 2.0 * params.c_beta * b_sum;

    // weighted circ values g(t) = circ(t) e^{-beta t} and their partial tails
    std::vector<double> g(l_star + 1, 0.0);
    double sigma = 0.0;
    for (int t = 2; t <= l_star; ++t) {
        g[t] = std::exp(circ.values[t].log_value - beta * t);
        sigma += g[t];
    }
    // tail(j) >= sum_{t > j} g(t), exact up to l_star then bounded by B
    std::vector<double> tail(l_star + 1, big_b);
    for (int j = l_star - 1; j >= 0; --j) tail[j] = tail[j + 1] + g[j + 1];

    double bound = 0.5 * big_b;
    for (int k = 1; k <= l_star - 2; ++k) bound += std::exp(-beta * k) * tail[l_star - k];
    bound += std::exp(-beta * (l_star - 1)) / (-std::expm1(-beta)) * (sigma + big_b);
    return bound;
}

} // namespace ipdsaw
