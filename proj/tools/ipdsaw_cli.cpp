// Command-line front end: verification campaigns and machine-readable data
// exports for the IPDSAW collapsed-phase laboratory.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipdsaw/beads.hpp"
#include "ipdsaw/continuum.hpp"
#include "ipdsaw/excursion.hpp"
#include "ipdsaw/finite_tilt.hpp"
#include "ipdsaw/io.hpp"
#include "ipdsaw/laplace.hpp"
#include "ipdsaw/partition_dp.hpp"
#include "ipdsaw/sampling.hpp"
#include "ipdsaw/verify.hpp"
#include "ipdsaw/version.hpp"

namespace {

using nlohmann::ordered_json;

void emit_report(const ordered_json& report, const std::string& output_path,
                 const std::string& format) {
    std::string text;
    if (format == "csv") {
        std::ostringstream os;
        os << "name,value\n";
        for (const auto& [key, val] : report.at("results").items()) {
            if (val.is_number())
                os << key << ',' << (val.is_number_float() ? ipdsaw::fmt17(val.get<double>())
                                                           : val.dump())
                   << '\n';
            else
                os << key << ',' << val.dump() << '\n';
        }
        text = os.str();
    } else {
        text = report.dump(2) + "\n";
    }
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path);
        if (!out) throw std::runtime_error("cannot open '" + output_path + "' for writing");
        out << text;
    }
}

ordered_json report_skeleton(const std::string& command) {
    ordered_json report;
    report["schema_version"] = ipdsaw::kSchemaVersion;
    report["code_version"] = ipdsaw::kVersion;
    report["command"] = command;
    return report;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated integer list");
    return out;
}

int cmd_constants(double beta, const std::string& output, const std::string& format) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    ordered_json report = report_skeleton("constants");
    report["config"] = {{"beta", beta}};
    ordered_json r;
    r["beta_c"] = ipdsaw::beta_critical();
    r["c_beta"] = p.c_beta;
    r["gamma_beta"] = p.gamma_beta;
    if (beta >= ipdsaw::beta_critical()) {
        r["zeta_beta"] = ipdsaw::zeta_beta(p);
        r["r_beta"] = ipdsaw::r_beta(p);
        const ipdsaw::DeltaCoeffs d = ipdsaw::delta_coeffs(p);
        r["delta1"] = d.delta1;
        r["delta2"] = d.delta2;
    }
    if (beta > ipdsaw::beta_critical()) {
        const ipdsaw::CollapsedConstants k = ipdsaw::k_constants(p);
        r["a_beta"] = k.a_beta;
        r["g_tilde_max"] = k.g_tilde_max;
        r["g_tilde_second"] = k.g_tilde_second;
        r["c_prefactor"] = k.c_prefactor;
        r["k_circ"] = k.k_circ;
        r["k_hat"] = k.k_hat;
        r["k_bar"] = k.k_bar;
        r["k_beta"] = k.k_beta;
        r["k_beta_route_a"] = k.k_beta_route_a;
        r["k_beta_route_b"] = k.k_beta_route_b;
        r["route_relative_gap"] =
            std::abs(k.k_beta_route_a - k.k_beta_route_b) / k.k_beta_route_a;
    } else {
        r["note"] = "collapsed-phase constants require beta > beta_c";
    }
    report["results"] = std::move(r);
    emit_report(report, output, format);
    return 0;
}

int cmd_partition(double beta, int l_max, const std::string& variant_name, bool check_bruteforce,
                  bool exact, const std::string& output) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    ipdsaw::Variant variant = ipdsaw::Variant::full;
    if (variant_name == "circ") variant = ipdsaw::Variant::circ;
    else if (variant_name == "hat_circ") variant = ipdsaw::Variant::hat_circ;
    else if (variant_name == "bar_circ") variant = ipdsaw::Variant::bar_circ;
    else if (variant_name == "c_end") variant = ipdsaw::Variant::c_end;
    else if (variant_name != "full")
        throw CLI::ValidationError("unknown variant '" + variant_name + "'");

    const ipdsaw::PartitionSeries series = ipdsaw::stretch_dp(p, l_max, variant);
    if (!output.empty()) ipdsaw::write_partition_series(series, output);

    bool ok = true;
    if (check_bruteforce) {
        const int cap = std::min(l_max, 12);
        double worst = 0.0;
        if (variant == ipdsaw::Variant::full) {
            for (int L = 1; L <= cap; ++L) {
                const double ref = ipdsaw::log_partition_from_histogram(
                    ipdsaw::enumerate_all(L), beta);
                worst = std::max(worst,
                                 std::abs(std::expm1(series.values[L].log_value - ref)));
            }
        } else {
            std::cerr << "note: --check-bruteforce compares the full variant only\n";
        }
        ok = worst < 1e-12;
        std::cout << (ok ? "[PASS]" : "[FAIL]")
                  << " partition_dp vs enumeration, L<=" << cap
                  << ": max relative error " << ipdsaw::fmt17(worst) << " (< 1e-12)\n";
    }
    if (exact) {
        const int cap = std::min(l_max, 14);
        const auto polys = ipdsaw::stretch_dp_exact(std::min(l_max, 30));
        bool exact_ok = true;
        for (int L = 1; L <= cap; ++L)
            exact_ok =
                exact_ok && ipdsaw::polynomial_matches_histogram(polys[L],
                                                                 ipdsaw::enumerate_all(L));
        ok = ok && exact_ok;
        std::cout << (exact_ok ? "[PASS]" : "[FAIL]")
                  << " exact polynomial mode vs enumeration, L<=" << cap << "\n";
    }
    if (output.empty() && !check_bruteforce && !exact) {
        std::cout << "L,log_value\n";
        for (int L = 1; L <= l_max; ++L)
            std::cout << L << ',' << ipdsaw::fmt17(series.values[L].log_value) << '\n';
    }
    return ok ? 0 : 1;
}

int cmd_excursion(double beta, int n, long long area_cap, int height_cap,
                  const std::string& output) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    const ipdsaw::ExcursionTable table = ipdsaw::excursion_table(p, n, area_cap, height_cap);
    if (!output.empty()) {
        ipdsaw::write_excursion_table(table, output);
    } else {
        std::cout << "k,prob\n";
        for (long long k = 0; k <= table.area_cap; ++k)
            std::cout << k << ',' << ipdsaw::fmt17(table.prob(k)) << '\n';
    }
    std::cerr << "tail_bound=" << ipdsaw::fmt17(table.tail_bound) << "\n";
    return 0;
}

int cmd_llt_scan(double beta, double q, const std::vector<int>& ns, const std::string& output,
                 const std::string& format) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    ordered_json report = report_skeleton("llt-scan");
    report["config"] = {{"beta", beta}, {"q", q}, {"n_list", ns}};
    ordered_json results;
    ordered_json rows = ordered_json::array();
    for (int n : ns) {
        const double ratio = ipdsaw::llt_ratio(p, n, q);
        rows.push_back({{"n", n}, {"ratio", ratio}});
    }
    results["rows"] = std::move(rows);
    report["results"] = std::move(results);
    emit_report(report, output, format == "csv" ? "json" : format);
    return 0;
}

int cmd_em_scan(double beta, double K, int order, const std::vector<int>& ns,
                const std::string& output, const std::string& format) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    const auto scan = ipdsaw::em_gap_scan(p, ns, K, order);
    ordered_json report = report_skeleton("em-scan");
    report["config"] = {{"beta", beta}, {"K", K}, {"order", order}, {"n_list", ns}};
    ordered_json rows = ordered_json::array();
    for (const auto& row : scan)
        rows.push_back({{"n", row.n},
                        {"sup_gap", row.sup_gap},
                        {"n2_sup_gap", static_cast<double>(row.n) * row.n * row.sup_gap}});
    report["results"] = {{"rows", rows}};
    emit_report(report, output, format == "csv" ? "json" : format);
    return 0;
}

int cmd_fit(double beta, int l_min, int l_max, const std::string& output,
            const std::string& format) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    const ipdsaw::AsymptoticsFit fit = ipdsaw::asymptotics_fit(p, l_min, l_max);
    ordered_json report = report_skeleton("fit");
    report["config"] = {{"beta", beta}, {"l_min", l_min}, {"l_max", l_max}};
    ordered_json r;
    r["sqrt_coeff"] = fit.sqrt_coeff;
    r["log_slope"] = fit.log_slope;
    r["intercept"] = fit.intercept;
    r["exp_intercept"] = std::exp(fit.intercept);
    if (beta > ipdsaw::beta_critical()) {
        const ipdsaw::CollapsedConstants k = ipdsaw::k_constants(p);
        r["g_tilde_max"] = k.g_tilde_max;
        r["k_beta"] = k.k_beta;
        r["sqrt_coeff_relative_error"] =
            std::abs(fit.sqrt_coeff - k.g_tilde_max) / std::abs(k.g_tilde_max);
        r["intercept_ratio"] = std::exp(fit.intercept) / k.k_beta;
    }
    report["results"] = std::move(r);
    emit_report(report, output, format);
    return 0;
}

int cmd_sample(double beta, int length, int count, std::uint64_t seed,
               const std::string& output) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    const ipdsaw::SampleBatch batch = ipdsaw::sample_polymer(p, length, count, seed);
    if (!output.empty())
        ipdsaw::write_sample_batch(batch, output);
    else
        ipdsaw::write_sample_batch(batch, std::cout);
    return 0;
}

int cmd_beads(double beta, int length, int count, std::uint64_t seed,
              const std::string& k_grid_csv, const std::string& output) {
    const ipdsaw::ModelParams p = ipdsaw::ModelParams::make(beta);
    const ipdsaw::SampleBatch batch = ipdsaw::sample_polymer(p, length, count, seed);
    std::vector<long long> grid;
    for (int k : parse_int_list(k_grid_csv)) grid.push_back(k);
    const ipdsaw::BeadSurvey survey = ipdsaw::bead_survey(batch, grid);
    if (!output.empty()) {
        ipdsaw::write_bead_survey(survey, output);
    } else {
        std::cout << "k,empirical_prob,count\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            std::cout << grid[i] << ',' << ipdsaw::fmt17(survey.empirical_prob[i]) << ','
                      << survey.counts[i] << '\n';
    }
    return 0;
}

int cmd_verify_all(double beta, std::uint64_t seed, bool quick, const std::string& output,
                   const std::string& format) {
    ipdsaw::VerifyProfile prof;
    prof.quick = quick;
    prof.seed = seed;
    prof.beta = beta;

    std::vector<ipdsaw::CheckResult> checks;
    checks.reserve(11);
    using Clock = std::chrono::steady_clock;
    const auto run = [&](auto&& fn, const char* name) {
        const auto t0 = Clock::now();
        checks.push_back(fn(prof));
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        std::cerr << "stage " << name << ": " << sec << " s\n";
    };
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_bruteforce(p); }, "bruteforce");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_walk_representation(p); },
        "walk-representation");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_renewal(p); }, "renewal");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_delta_chain(p); }, "delta");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_monte_carlo(p); },
        "monte-carlo");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_legendre(p); }, "legendre");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_gap_scaling(p); },
        "gap-scaling");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_local_limit(p); },
        "local-limit");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_asymptotic_fit(p); }, "fit");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_prefactor_routes(p); },
        "prefactor-routes");
    run([](const ipdsaw::VerifyProfile& p) { return ipdsaw::check_macroscopic_bead(p); },
        "beads");

    bool all_pass = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << "\n";
        if (!c.pass)
            for (const auto& r : c.rows)
                if (!r.pass)
                    std::cout << "       " << r.name << ": value "
                              << ipdsaw::fmt17(r.value) << " violates " << r.relation << " "
                              << ipdsaw::fmt17(r.threshold) << "\n";
        all_pass = all_pass && c.pass;
    }

    ordered_json report = report_skeleton("verify-all");
    report["config"] = {{"beta", beta}, {"seed", seed}, {"quick", quick}};
    report["results"] = {{"all_pass", all_pass},
                         {"checks", ipdsaw::checks_to_json(checks)}};
    if (!output.empty()) emit_report(report, output, format);
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"IPDSAW collapsed-phase laboratory"};
    app.require_subcommand(1);

    double beta = 2.0;
    std::uint64_t seed = 1;
    std::string output, format = "json";
    int l_max = 60, l_min = 300, n = 16, length = 100, count = 100, order = 0, height_cap = -1;
    long long area_cap = 256;
    double q = 1.0, K = 0.3;
    bool quick = false, check_bruteforce = false, exact = false;
    std::string variant = "full", n_list = "16,24,32,40,48", k_grid = "0,10,20,30,40";

    auto* c_const = app.add_subcommand("constants", "closed-form and variational constants");
    c_const->add_option("--beta", beta)->required();
    c_const->add_option("--output", output);
    c_const->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* c_part = app.add_subcommand("partition", "partition value series by DP");
    c_part->add_option("--beta", beta)->required();
    c_part->add_option("--lmax", l_max)->required();
    c_part->add_option("--variant", variant)
        ->check(CLI::IsMember({"full", "circ", "hat_circ", "bar_circ", "c_end"}));
    c_part->add_flag("--check-bruteforce", check_bruteforce);
    c_part->add_flag("--exact", exact);
    c_part->add_option("--output", output);

    auto* c_exc = app.add_subcommand("excursion", "area-resolved positive-excursion table");
    c_exc->add_option("--beta", beta)->required();
    c_exc->add_option("--n", n)->required();
    c_exc->add_option("--area-cap", area_cap)->required();
    c_exc->add_option("--height-cap", height_cap);
    c_exc->add_option("--output", output);

    auto* c_llt = app.add_subcommand("llt-scan", "local limit ratio over n");
    c_llt->add_option("--beta", beta)->required();
    c_llt->add_option("--q", q)->required();
    c_llt->add_option("--n-list", n_list);
    c_llt->add_option("--output", output);
    c_llt->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* c_em = app.add_subcommand("em-scan", "discrete-to-continuum sup gaps");
    c_em->add_option("--beta", beta)->required();
    c_em->add_option("--K", K);
    c_em->add_option("--order", order)->check(CLI::Range(0, 1));
    c_em->add_option("--n-list", n_list);
    c_em->add_option("--output", output);
    c_em->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* c_fit = app.add_subcommand("fit", "asymptotic shape fit of log Z");
    c_fit->add_option("--beta", beta)->required();
    c_fit->add_option("--lmin", l_min);
    c_fit->add_option("--lmax", l_max)->required();
    c_fit->add_option("--output", output);
    c_fit->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* c_sample = app.add_subcommand("sample", "exact Boltzmann samples");
    c_sample->add_option("--beta", beta)->required();
    c_sample->add_option("--length", length)->required();
    c_sample->add_option("--count", count)->required();
    c_sample->add_option("--seed", seed);
    c_sample->add_option("--output", output);

    auto* c_beads = app.add_subcommand("beads", "largest-bead survey on exact samples");
    c_beads->add_option("--beta", beta)->required();
    c_beads->add_option("--length", length)->required();
    c_beads->add_option("--count", count)->required();
    c_beads->add_option("--seed", seed);
    c_beads->add_option("--k-grid", k_grid);
    c_beads->add_option("--output", output);

    auto* c_verify = app.add_subcommand("verify-all", "full verification campaign");
    c_verify->add_option("--beta", beta);
    c_verify->add_option("--seed", seed);
    c_verify->add_flag("--quick", quick);
    c_verify->add_option("--output", output);
    c_verify->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_const->parsed()) return cmd_constants(beta, output, format);
        if (c_part->parsed())
            return cmd_partition(beta, l_max, variant, check_bruteforce, exact, output);
        if (c_exc->parsed()) return cmd_excursion(beta, n, area_cap, height_cap, output);
        if (c_llt->parsed()) return cmd_llt_scan(beta, q, parse_int_list(n_list), output, format);
        if (c_em->parsed())
            return cmd_em_scan(beta, K, order, parse_int_list(n_list), output, format);
        if (c_fit->parsed()) return cmd_fit(beta, l_min, l_max, output, format);
        if (c_sample->parsed()) return cmd_sample(beta, length, count, seed, output);
        if (c_beads->parsed()) return cmd_beads(beta, length, count, seed, k_grid, output);
        if (c_verify->parsed()) return cmd_verify_all(beta, seed, quick, output, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
