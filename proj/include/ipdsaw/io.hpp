#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ipdsaw/beads.hpp"
#include "ipdsaw/excursion.hpp"
#include "ipdsaw/partition_dp.hpp"
#include "ipdsaw/sampling.hpp"
#include "ipdsaw/version.hpp"

namespace ipdsaw {

/// Doubles rendered with 17 significant digits, enough to round-trip exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
    return out;
}

inline void write_sidecar(const std::string& data_path, nlohmann::ordered_json meta) {
    meta["schema_version"] = kSchemaVersion;
    meta["code_version"] = kVersion;
    auto out = open_out(data_path + ".meta.json");
    out << meta.dump(2) << '\n';
}

} // namespace detail

/// Columnar CSV `L,log_value` plus a JSON metadata sidecar at
/// `<path>.meta.json`.
inline void write_partition_series(const PartitionSeries& series, const std::string& path) {
    auto out = detail::open_out(path);
    out << "L,log_value\n";
    for (int L = 1; L <= series.l_max(); ++L)
        out << L << ',' << fmt17(series.values[L].log_value) << '\n';
    nlohmann::ordered_json meta;
    meta["quantity"] = "partition_series";
    meta["beta"] = series.beta;
    meta["variant"] = variant_name(series.variant);
    meta["l_max"] = series.l_max();
    detail::write_sidecar(path, std::move(meta));
}

/// Columnar CSV `k,prob` plus a JSON metadata sidecar.
inline void write_excursion_table(const ExcursionTable& table, const std::string& path) {
    auto out = detail::open_out(path);
    out << "k,prob\n";
    for (long long k = 0; k <= table.area_cap; ++k)
        out << k << ',' << fmt17(table.prob(k)) << '\n';
    nlohmann::ordered_json meta;
    meta["quantity"] = "excursion_table";
    meta["beta"] = table.beta;
    meta["n"] = table.n;
    meta["area_cap"] = table.area_cap;
    meta["height_cap"] = table.height_cap;
    meta["tail_bound"] = table.tail_bound;
    detail::write_sidecar(path, std::move(meta));
}

/// One trajectory per line, stretches comma-separated; the header line
/// carries beta, length and seed.
inline void write_sample_batch(const SampleBatch& batch, std::ostream& out) {
    out << "# beta=" << fmt17(batch.beta) << " L=" << batch.length << " seed=" << batch.seed
        << " count=" << batch.trajectories.size() << '\n';
    for (const Trajectory& t : batch.trajectories) {
        for (std::size_t i = 0; i < t.stretches.size(); ++i) {
            if (i) out << ',';
            out << t.stretches[i];
        }
        out << '\n';
    }
}

inline void write_sample_batch(const SampleBatch& batch, const std::string& path) {
    auto out = detail::open_out(path);
    write_sample_batch(batch, out);
}

/// Survey CSV `k,empirical_prob,count`.
inline void write_bead_survey(const BeadSurvey& survey, const std::string& path) {
    auto out = detail::open_out(path);
    out << "k,empirical_prob,count\n";
    for (std::size_t i = 0; i < survey.k_grid.size(); ++i)
        out << survey.k_grid[i] << ',' << fmt17(survey.empirical_prob[i]) << ','
            << survey.counts[i] << '\n';
    nlohmann::ordered_json meta;
    meta["quantity"] = "bead_survey";
    meta["beta"] = survey.beta;
    meta["length"] = survey.length;
    detail::write_sidecar(path, std::move(meta));
}

} // namespace ipdsaw
