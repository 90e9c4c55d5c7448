#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipdsaw/beads.hpp"
#include "ipdsaw/continuum.hpp"
#include "ipdsaw/enumerate.hpp"
#include "ipdsaw/excursion.hpp"
#include "ipdsaw/finite_tilt.hpp"
#include "ipdsaw/io.hpp"
#include "ipdsaw/laplace.hpp"
#include "ipdsaw/partition_dp.hpp"
#include "ipdsaw/sampling.hpp"
#include "ipdsaw/version.hpp"

namespace ipdsaw {

struct CheckRow {
    std::string name;
    double value;
    double threshold;
    std::string relation; // "<", "<=", ">=", "in_band", "=="
    bool pass;
};

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = true;
    std::vector<CheckRow> rows;

    void add(const std::string& name, double value, double threshold,
             const std::string& relation, bool ok) {
        rows.push_back({name, value, threshold, relation, ok});
        pass = pass && ok;
    }
    void add_max(const std::string& name, double value, double threshold) {
        add(name, value, threshold, "<", value < threshold);
    }
};

/// Scales for the verification campaign; `quick` trims sample counts and
/// table sizes while keeping every check meaningful.
struct VerifyProfile {
    bool quick = false;
    std::uint64_t seed = 1;
    double beta = 2.0; // the single-beta checks run here; multi-beta grids are fixed
};

namespace verify_detail {

inline std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i)
        g[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    return g;
}

inline double rel_gap_log(double log_a, double log_b) {
    return std::abs(std::expm1(log_a - log_b));
}

} // namespace verify_detail

/// 1. Transfer-matrix DP against exhaustive enumeration, plus the exact
/// integer-polynomial mode.
inline CheckResult check_bruteforce(const VerifyProfile& prof) {
    CheckResult res{1, "brute-force equivalence (DP vs enumeration, exact polynomials)"};
    const int l_cap = prof.quick ? 10 : 12;
    std::vector<std::map<int, std::uint64_t>> hists(l_cap + 1);
    for (int L = 1; L <= l_cap; ++L) hists[L] = enumerate_all(L);

    const double betas[] = {0.5, beta_critical(), 2.0, 3.0};
    const char* names[] = {"beta=0.5", "beta=beta_c", "beta=2", "beta=3"};
    for (int bi = 0; bi < 4; ++bi) {
        const ModelParams p = ModelParams::make(betas[bi]);
        const PartitionSeries dp = stretch_dp(p, l_cap, Variant::full);
        double worst = 0.0;
        for (int L = 1; L <= l_cap; ++L) {
            const double ref = log_partition_from_histogram(hists[L], p.beta);
            worst = std::max(worst,
                             verify_detail::rel_gap_log(dp.values[L].log_value, ref));
        }
        res.add_max(std::string("dp vs enumeration, ") + names[bi] + ", L<=" +
                        std::to_string(l_cap),
                    worst, 1e-12);
    }
    const auto polys = stretch_dp_exact(l_cap);
    bool exact_ok = true;
    for (int L = 1; L <= l_cap; ++L)
        exact_ok = exact_ok && polynomial_matches_histogram(polys[L], hists[L]);
    res.add("exact polynomial mode matches enumeration maps", exact_ok ? 1.0 : 0.0, 1.0, "==",
            exact_ok);
    return res;
}

/// 2. Positive-excursion walk representation of the single-bead values.
inline CheckResult check_walk_representation(const VerifyProfile& prof) {
    CheckResult res{2, "walk representation of single-bead partition values"};
    const int l_cap = prof.quick ? 24 : 40;
    for (double beta : {1.5, 2.0, 3.0}) {
        const ModelParams p = ModelParams::make(beta);
        const PartitionSeries circ = stretch_dp(p, l_cap, Variant::circ);
        double worst = 0.0;
        for (int L = 2; L <= l_cap; ++L)
            worst = std::max(worst,
                             verify_detail::rel_gap_log(
                                 walk_rep_single_bead(p, L).log_value,
                                 circ.values[L].log_value));
        res.add_max("circ DP vs walk representation, beta=" + fmt17(beta) + ", L<=" +
                        std::to_string(l_cap),
                    worst, 1e-10);
    }
    return res;
}

/// 3. Bead-renewal convolution identities, with hand-checked anchors.
inline CheckResult check_renewal(const VerifyProfile& prof) {
    CheckResult res{3, "renewal identities of the bead decomposition"};
    const int l_cap = prof.quick ? 40 : 60;
    const ModelParams p = ModelParams::make(prof.beta);
    res.add_max("max relative renewal error, L<=" + std::to_string(l_cap),
                renewal_check(p, l_cap), 1e-10);
    const PartitionSeries cend = stretch_dp(p, 4, Variant::c_end);
    res.add_max("nonzero-ending value at L=2 vs 2",
                std::abs(std::expm1(cend.values[2].log_value - std::log(2.0))), 1e-12);
    res.add_max("nonzero-ending value at L=4 vs 8+2e^beta",
                std::abs(std::expm1(cend.values[4].log_value -
                                    std::log(8.0 + 2.0 * std::exp(2.0)))),
                1e-12);
    return res;
}

/// 4. Closed-form delta coefficients against the truncated series.
inline CheckResult check_delta_chain(const VerifyProfile& prof) {
    CheckResult res{4, "closed-form delta coefficients"};
    res.add_max("|delta2(beta_c) - 1|",
                std::abs(delta_coeffs(ModelParams::make(beta_critical())).delta2 - 1.0),
                1e-10);
    for (double beta : {1.4, 2.0, 3.0})
        res.add("delta2 < 1 at beta=" + fmt17(beta),
                delta_coeffs(ModelParams::make(beta)).delta2, 1.0, "<",
                delta_coeffs(ModelParams::make(beta)).delta2 < 1.0);
    const int l_star = prof.quick ? 120 : 200;
    const ModelParams p = ModelParams::make(prof.beta);
    const PartitionSeries circ = stretch_dp(p, l_star, Variant::circ);
    const PartitionSeries hat = stretch_dp(p, l_star, Variant::hat_circ);
    double series = 0.0;
    for (int L = 2; L <= l_star; ++L)
        series += std::exp(hat.values[L].log_value - p.beta * L);
    const double bound = delta2_series_tail_bound(p, circ, l_star);
    const double gap = std::abs(delta_coeffs(p).delta2 - series);
    res.add("|delta2 - truncated series(L*=" + std::to_string(l_star) + ")| vs tail bound",
            gap, bound, "<=", gap <= bound);
    return res;
}

/// 5. Monte Carlo estimators against the closed forms.
inline CheckResult check_monte_carlo(const VerifyProfile& prof) {
    CheckResult res{5, "Monte Carlo vs closed forms"};
    const ModelParams p = ModelParams::make(prof.beta);
    {
        const long long n = prof.quick ? 200000 : 1000000;
        const McEstimate e = mc_kappa(p, 0.5, n, 2000, prof.seed);
        const double err = std::abs(e.estimate - kappa(p, 0.5));
        const double band = 4.0 * e.std_error + e.cap_bias_bound;
        res.add("|mc_kappa - kappa(0.5)| vs 4 sigma (n=" + std::to_string(n) + ")", err, band,
                "<=", err <= band);
    }
    {
        const long long n = prof.quick ? 1000000 : 10000000;
        const McEstimate e = mc_r_beta(p, n, 200, prof.seed + 1);
        const double err = std::abs(e.estimate - r_beta(p));
        const double band = 4.0 * e.std_error + e.cap_bias_bound;
        res.add("|mc_r_beta - r_beta| vs 4 sigma (n=" + std::to_string(n) + ")", err, band,
                "<=", err <= band);
    }
    return res;
}

/// 6. Legendre structure of the rate function across a wide q grid.
inline CheckResult check_legendre(const VerifyProfile& prof) {
    CheckResult res{6, "Legendre identities of the rate function"};
    const int points = prof.quick ? 9 : 25;
    const auto grid = verify_detail::log_grid(0.05, 20.0, points);
    for (double beta : {1.5, 2.0, 3.0}) {
        const ModelParams p = ModelParams::make(beta);
        double worst_resid = 0.0, worst_fd = 0.0;
        for (double q : grid) {
            worst_resid = std::max(worst_resid, std::abs(legendre_identity_residual(p, q)));
            const double dq = 1e-5;
            const double fd =
                (psi_tilde(p, q + dq).psi - psi_tilde(p, q - dq).psi) / (2.0 * dq);
            worst_fd = std::max(worst_fd, std::abs(fd - psi_tilde(p, q).psi_prime));
        }
        res.add_max("max Legendre identity residual, beta=" + fmt17(beta), worst_resid, 1e-10);
        res.add_max("max |psi' - finite difference|, beta=" + fmt17(beta), worst_fd, 1e-6);
    }
    return res;
}

/// 7. Discrete-to-continuum gap scaling: n^2-scaled gaps must stay within a
/// factor 1.5 of their n=100 values.
inline CheckResult check_gap_scaling(const VerifyProfile& prof) {
    CheckResult res{7, "discrete-to-continuum n^-2 gap scaling"};
    const ModelParams p = ModelParams::make(prof.beta);
    const std::vector<int> ns =
        prof.quick ? std::vector<int>{100, 200, 400} : std::vector<int>{100, 200, 400, 700, 1000};
    for (int order : {0, 1}) {
        const auto rows = em_gap_scan(p, ns, 0.3, order);
        const double ref = 100.0 * 100.0 * rows[0].sup_gap;
        double worst_ratio = 1.0;
        for (const auto& r : rows) {
            const double scaled = static_cast<double>(r.n) * r.n * r.sup_gap;
            worst_ratio = std::max(worst_ratio, std::max(scaled / ref, ref / scaled));
        }
        res.add("n^2 sup-gap order " + std::to_string(order) + " vs n=100, worst ratio",
                worst_ratio, 1.5, "<=", worst_ratio <= 1.5);
    }
    for (double q : {0.3, 1.0, 3.0}) {
        const double ht = h_tilde(p, q);
        double ref = 0.0, worst_ratio = 1.0;
        for (int n : ns) {
            const double scaled = static_cast<double>(n) * n * std::abs(h_n_q(p, n, q) - ht);
            if (n == 100) ref = scaled;
            const double ratio = std::max(scaled / ref, ref / scaled);
            worst_ratio = std::max(worst_ratio, ratio);
        }
        res.add("n^2 |h_n^q - h~^q| at q=" + fmt17(q) + " vs n=100, worst ratio", worst_ratio,
                1.5, "<=", worst_ratio <= 1.5);
    }
    return res;
}

/// 8. Sharp local limit estimate for the constrained excursion.
inline CheckResult check_local_limit(const VerifyProfile& prof) {
    CheckResult res{8, "local limit estimate for area-constrained excursions"};
    const ModelParams p = ModelParams::make(prof.beta);
    const double q = 1.0;
    const RateFunctionPoint rp = psi_tilde(p, q);
    const double c_bq = c_prefactor(p, q);
    const std::vector<int> ns =
        prof.quick ? std::vector<int>{16, 24, 32} : std::vector<int>{16, 24, 32, 40, 48};
    std::vector<double> ratios;
    double worst_tail_frac = 0.0;
    for (int n : ns) {
        const long long k = static_cast<long long>(n) * n;
        const ExcursionTable table = excursion_table(p, n, k);
        double retained = 0.0;
        for (double v : table.probabilities) retained += v;
        if (retained > 0.0)
            worst_tail_frac = std::max(worst_tail_frac, table.tail_bound / retained);
        const double log_ratio = 2.0 * std::log((double)n) + std::log(table.prob(k)) +
                                 n * rp.psi - std::log(c_bq);
        ratios.push_back(std::exp(log_ratio));
    }
    bool trending = true;
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
        trending = trending && std::abs(ratios[i + 1] - 1.0) < std::abs(ratios[i] - 1.0);
    res.add("|ratio - 1| decreasing across the n grid", trending ? 1.0 : 0.0, 1.0, "==",
            trending);
    res.add_max("|ratio - 1| at n=" + std::to_string(ns.back()),
                std::abs(ratios.back() - 1.0), 0.15);
    res.add_max("height-cap tail bound / retained mass", worst_tail_frac, 1e-14);
    return res;
}

/// 9. Fitted asymptotic shape of the full partition values against the
/// collapsed-phase constants.
inline CheckResult check_asymptotic_fit(const VerifyProfile& prof) {
    CheckResult res{9, "asymptotic shape of the partition values"};
    const ModelParams p = ModelParams::make(prof.beta);
    const AsymptoticsFit fit = asymptotics_fit(p, 300, 1000);
    const CollapsedConstants k = k_constants(p);
    res.add_max("relative error of the sqrt(L) coefficient vs the variational maximum",
                std::abs(fit.sqrt_coeff - k.g_tilde_max) / std::abs(k.g_tilde_max), 0.01);
    res.add("log-slope in [-0.90, -0.60]", fit.log_slope, -0.75, "in_band",
            fit.log_slope >= -0.90 && fit.log_slope <= -0.60);
    const double ratio = std::exp(fit.intercept) / k.k_beta;
    res.add("e^{intercept} / K within a factor 1.5", ratio, 1.5, "in_band",
            ratio <= 1.5 && ratio >= 1.0 / 1.5);
    (void)prof;
    return res;
}

/// 10. Prefactor assembly by two independent routes.
inline CheckResult check_prefactor_routes(const VerifyProfile&) {
    CheckResult res{10, "prefactor route consistency"};
    for (double beta : {1.4, 1.8, 2.0, 2.5, 3.0}) {
        const CollapsedConstants k = k_constants(ModelParams::make(beta));
        res.add_max("route gap at beta=" + fmt17(beta),
                    std::abs(k.k_beta_route_a - k.k_beta_route_b) / k.k_beta_route_a, 1e-9);
    }
    return res;
}

/// 11. One-macroscopic-bead statistics on exact samples.
inline CheckResult check_macroscopic_bead(const VerifyProfile& prof) {
    CheckResult res{11, "macroscopic bead statistics"};
    const ModelParams p = ModelParams::make(prof.beta);
    const int L = 400;
    const int count = prof.quick ? 2000 : 10000;
    const SampleBatch batch = sample_polymer(p, L, count, prof.seed + 2);
    const std::vector<long long> grid = {0, 10, 20, 30, 40, L};
    const BeadSurvey survey = bead_survey(batch, grid);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        monotone = monotone && survey.empirical_prob[i] <= survey.empirical_prob[i + 1];
    res.add("empirical P(|I_max| >= L-k) nondecreasing in k", monotone ? 1.0 : 0.0, 1.0, "==",
            monotone);
    res.add("P(|I_max| >= L-40) at L=400", survey.empirical_prob[4], 0.9, ">=",
            survey.empirical_prob[4] >= 0.9);
    res.add("P(|I_max| >= 0) == 1", survey.empirical_prob.back(), 1.0, "==",
            survey.empirical_prob.back() == 1.0);
    return res;
}

inline std::vector<CheckResult> run_verification(const VerifyProfile& prof) {
    return {check_bruteforce(prof),       check_walk_representation(prof),
            check_renewal(prof),          check_delta_chain(prof),
            check_monte_carlo(prof),      check_legendre(prof),
            check_gap_scaling(prof),      check_local_limit(prof),
            check_asymptotic_fit(prof),   check_prefactor_routes(prof),
            check_macroscopic_bead(prof)};
}

inline nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["title"] = c.title;
        jc["pass"] = c.pass;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : c.rows) {
            nlohmann::ordered_json jr;
            jr["name"] = r.name;
            jr["value"] = r.value;
            jr["threshold"] = r.threshold;
            jr["relation"] = r.relation;
            jr["pass"] = r.pass;
            rows.push_back(std::move(jr));
        }
        jc["rows"] = std::move(rows);
        arr.push_back(std::move(jc));
    }
    return arr;
}

} // namespace ipdsaw
