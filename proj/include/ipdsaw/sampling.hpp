#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ipdsaw/laplace.hpp"
#include "ipdsaw/log_weight.hpp"
#include "ipdsaw/partition_dp.hpp"
#include "ipdsaw/rng.hpp"
#include "ipdsaw/trajectory.hpp"

namespace ipdsaw {

struct SampleBatch {
    double beta;
    int length;
    std::uint64_t seed;
    std::vector<Trajectory> trajectories;
};

namespace detail {

// Weighted draw over log weights; linear scan keeps the order deterministic.
inline int draw_from_log_weights(const std::vector<double>& logw, Xoshiro256pp& rng) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logw) mx = std::max(mx, v);
    double total = 0.0;
    for (double v : logw) total += std::exp(v - mx);
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < logw.size(); ++i) {
        u -= std::exp(logw[i] - mx);
        if (u <= 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(logw.size()) - 1;
}

// log((1 + e^{beta m}) / 2), the sign-summed transition factor
inline double log_pair_factor(double beta, long long m) {
    const double bm = beta * static_cast<double>(m);
    return log_add(0.0, bm) - std::log(2.0);
}

} // namespace detail

/// Exact Boltzmann sampling by backward passes through the stretch DP table:
/// the final state is drawn proportional to its terminal weight, then each
/// predecessor proportional to state weight times transition weight. Signs
/// ride along the collapsed magnitudes: a magnitude pair (m0, m) takes the
/// opposite sign with probability e^{beta min(m0,m)} / (1 + e^{beta min(m0,m)}).
inline SampleBatch sample_polymer(const StretchTable& table, int L, int count,
                                  std::uint64_t seed) {
    if (L < 1 || L > table.l_max())
        throw std::invalid_argument("sampling: sample_polymer: L outside the DP table range");
    if (count < 0) throw std::invalid_argument("sampling: sample_polymer: count must be >= 0");
    const double beta = table.beta();
    Xoshiro256pp rng(seed);
    SampleBatch batch{beta, L, seed, {}};
    batch.trajectories.reserve(count);

    std::vector<double> w;
    for (int sample = 0; sample < count; ++sample) {
        std::vector<int> rev; // stretches, last first
        const std::vector<double>& last_row = table.row(L);
        int m = detail::draw_from_log_weights(last_row, rng);
        int sign = m > 0 ? (rng.next() & 1 ? 1 : -1) : 0;
        rev.push_back(sign * m);
        int c = L;
        while (true) {
            const int src = c - m - 1;
            if (src == 0) break; // reached the first stretch
            const std::vector<double>& row = table.row(src);
            w.assign(row.size(), 0.0);
            for (std::size_t m0 = 0; m0 < row.size(); ++m0)
                w[m0] = row[m0] + detail::log_pair_factor(
                                      beta, std::min<long long>(static_cast<long long>(m0), m));
            const int m0 = detail::draw_from_log_weights(w, rng);
            int s0 = 0;
            if (m0 > 0) {
                if (m > 0) {
                    const double bm = beta * std::min(m0, m);
                    // logistic(bm) without overflow
                    const double p_opp = 1.0 / (1.0 + std::exp(-bm));
                    s0 = rng.uniform() < p_opp ? -sign : sign;
                } else {
                    s0 = rng.next() & 1 ? 1 : -1;
                }
            }
            rev.push_back(s0 * m0);
            c = src;
            m = m0;
            sign = s0;
        }
        Trajectory traj;
        traj.stretches.assign(rev.rbegin(), rev.rend());
        batch.trajectories.push_back(std::move(traj));
    }
    return batch;
}

inline SampleBatch sample_polymer(const ModelParams& params, int L, int count,
                                  std::uint64_t seed,
                                  std::size_t mem_budget = dp_memory_budget()) {
    StretchTable table(params, L, mem_budget);
    return sample_polymer(table, L, count, seed);
}

/// Draws from the h-tilted step law e^{hk} p_beta(k) / e^{L(h)} by inverse
/// CDF: the tilt folds into one geometric ratio per side, so each draw costs
/// one side decision plus one log.
class TiltedStepSampler {
public:
    TiltedStepSampler(const ModelParams& params, double h) {
        if (!(std::abs(h) < params.beta / 2.0))
            throw std::domain_error("sampling: tilted step law needs |h| < beta/2");
        up_ratio_ = std::exp(h - params.beta / 2.0);
        down_ratio_ = std::exp(-h - params.beta / 2.0);
        const double mass_up = 1.0 / (1.0 - up_ratio_);          // k >= 0
        const double mass_down = down_ratio_ / (1.0 - down_ratio_); // k <= -1
        p_up_ = mass_up / (mass_up + mass_down);
        inv_log_up_ = 1.0 / std::log(up_ratio_);
        inv_log_down_ = 1.0 / std::log(down_ratio_);
    }

    long long draw(Xoshiro256pp& rng) const {
        if (rng.uniform() < p_up_) {
            return static_cast<long long>(std::log(rng.uniform()) * inv_log_up_);
        }
        return -1 - static_cast<long long>(std::log(rng.uniform()) * inv_log_down_);
    }

private:
    double up_ratio_, down_ratio_, p_up_, inv_log_up_, inv_log_down_;
};

struct McEstimate {
    double estimate;
    double std_error;
    double cap_bias_bound;
};

/// Monte Carlo estimate of the escape probability kappa(h): fraction of
/// h-tilted walks staying positive up to step_cap. Truncation can only
/// inflate the estimate, by at most e^{-L(h)(cap+1)} / (1 - e^{-L(h)})
/// (Markov bound on a late first return at the tilted-mean rate).
inline McEstimate mc_kappa(const ModelParams& params, double h, long long n_samples,
                           int step_cap, std::uint64_t seed) {
    if (!(h > 0.0) || !(h < params.beta / 2.0))
        throw std::domain_error("sampling: mc_kappa: h must lie in (0, beta/2)");
    if (n_samples < 1 || step_cap < 1)
        throw std::invalid_argument("sampling: mc_kappa: need n_samples >= 1, step_cap >= 1");
    const TiltedStepSampler stepper(params, h);
    Xoshiro256pp rng(seed);
    long long survived = 0;
    for (long long i = 0; i < n_samples; ++i) {
        long long x = 0;
        bool alive = true;
        for (int step = 0; step < step_cap; ++step) {
            x += stepper.draw(rng);
            if (x <= 0) {
                alive = false;
                break;
            }
        }
        if (alive) ++survived;
    }
    const double p = static_cast<double>(survived) / static_cast<double>(n_samples);
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n_samples);
    const double rate = cgf(params, h, 0);
    const double bias = std::exp(-rate * (step_cap + 1)) / (-std::expm1(-rate));
    return {p, se, bias};
}

/// Monte Carlo estimate of r_beta = E[1_{X_1>0} 1_{X_rho=0} gamma^rho] for
/// the untilted walk, rho the first entry into the lower half plane;
/// truncation bias is at most gamma^rho_cap (gamma < 1 in the collapsed
/// phase).
inline McEstimate mc_r_beta(const ModelParams& params, long long n_samples, int rho_cap,
                            std::uint64_t seed) {
    if (params.beta <= beta_critical())
        throw std::domain_error("sampling: mc_r_beta: requires beta > beta_c");
    if (n_samples < 1 || rho_cap < 1)
        throw std::invalid_argument("sampling: mc_r_beta: need n_samples >= 1, rho_cap >= 1");
    const TiltedStepSampler stepper(params, 0.0);
    const double log_gamma = std::log(params.gamma_beta);
    Xoshiro256pp rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (long long i = 0; i < n_samples; ++i) {
        long long x = 0;
        bool first_up = false;
        double contrib = 0.0;
        for (int step = 1; step <= rho_cap; ++step) {
            x += stepper.draw(rng);
            if (step == 1) first_up = x > 0;
            if (x <= 0) {
                if (first_up && x == 0) contrib = std::exp(log_gamma * step);
                break;
            }
        }
        sum += contrib;
        sum_sq += contrib * contrib;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0);
    return {mean, std::sqrt(var / n), std::pow(params.gamma_beta, rho_cap)};
}

} // namespace ipdsaw
