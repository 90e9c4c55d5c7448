#pragma once

#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ipdsaw/enumerate.hpp"
#include "ipdsaw/laplace.hpp"
#include "ipdsaw/log_weight.hpp"

namespace ipdsaw {

enum class Variant { full, circ, hat_circ, bar_circ, c_end };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::circ: return "circ";
        case Variant::hat_circ: return "hat_circ";
        case Variant::bar_circ: return "bar_circ";
        default: return "c_end";
    }
}

/// Per-length partition values of one variant, on the log scale.
/// values[L] is the value at length L; entries below the variant's first
/// admissible length are zero weights.
struct PartitionSeries {
    Variant variant;
    double beta;
    std::vector<LogWeight> values;

    int l_max() const { return static_cast<int>(values.size()) - 1; }
};

/// Memory cap for DP tables, in bytes; IPDSAW_MEM_BUDGET_BYTES overrides the
/// 2 GiB default.
inline std::size_t dp_memory_budget() {
    if (const char* env = std::getenv("IPDSAW_MEM_BUDGET_BYTES")) {
        const unsigned long long v = std::strtoull(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{2} * 1024 * 1024 * 1024;
}

namespace detail {

inline void check_dp_budget(std::size_t bytes, std::size_t budget, const char* what) {
    if (bytes > budget)
        throw std::runtime_error(std::string("partition_dp: ") + what + ": table of " +
                                 std::to_string(bytes) + " bytes exceeds the memory budget of " +
                                 std::to_string(budget));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Forward DP over stretches. A state is (consumed length c, magnitude m of
// the last stretch); the +/- reflection symmetry collapses signs, leaving the
// sign-summed transition weight
//     t(m -> m') = 1 + e^{beta min(m, m')}        (m' > 0)
//     t(m -> 0)  = 1
// and seeds F(m+1, m) = 2 (m > 0), F(1, 0) = 1. Splitting the min-kernel with
// per-row prefix sums P(j) = sum_{m<=j} F e^{beta m} and suffix sums
// S(j) = sum_{m>j} F makes each state O(1), so the whole table is O(l_max^2).
// ---------------------------------------------------------------------------

class StretchTable {
public:
    StretchTable(const ModelParams& params, int l_max,
                 std::size_t mem_budget = dp_memory_budget())
        : beta_(params.beta), l_max_(l_max) {
        if (l_max < 1) throw std::invalid_argument("partition_dp: l_max must be >= 1");
        const std::size_t cells = (static_cast<std::size_t>(l_max) * (l_max + 1)) / 2;
        detail::check_dp_budget(cells * 3 * sizeof(double), mem_budget, "stretch_dp");

        constexpr double kNegInf = -std::numeric_limits<double>::infinity();
        rows_.resize(l_max + 1);
        std::vector<std::vector<double>> pre(l_max + 1), suf(l_max + 1);
        total_.assign(l_max + 1, kNegInf);
        total_pos_.assign(l_max + 1, kNegInf);

        for (int c = 1; c <= l_max; ++c) {
            std::vector<double> row(c, kNegInf);
            row[c - 1] = c - 1 > 0 ? std::log(2.0) : 0.0; // single-stretch seed
            if (c >= 2) row[0] = log_add(row[0], total_[c - 1]);
            for (int m = 1; m <= c - 2; ++m) {
                const int src = c - 1 - m;
                const int j = std::min(m, src - 1);
                double contrib = log_add(pre[src][j], total_[src]);
                if (j < src - 1) contrib = log_add(contrib, beta_ * m + suf[src][j]);
                row[m] = log_add(row[m], contrib);
            }
            std::vector<double> p(c), s(c);
            double acc = kNegInf;
            for (int m = 0; m < c; ++m) p[m] = acc = log_add(acc, row[m] + beta_ * m);
            acc = kNegInf;
            for (int m = c - 1; m >= 0; --m) {
                s[m] = acc; // sum over magnitudes strictly above m
                acc = log_add(acc, row[m]);
            }
            total_[c] = acc;
            double pos = kNegInf;
            for (int m = 1; m < c; ++m) pos = log_add(pos, row[m]);
            total_pos_[c] = pos;
            rows_[c] = std::move(row);
            pre[c] = std::move(p);
            suf[c] = std::move(s);
        }
    }

    double beta() const { return beta_; }
    int l_max() const { return l_max_; }
    const std::vector<double>& row(int c) const { return rows_[c]; }
    double log_z(int L) const { return total_[L]; }         // all configurations
    double log_z_c(int L) const { return total_pos_[L]; }   // last stretch nonzero

private:
    double beta_;
    int l_max_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> total_, total_pos_;
};

// Same DP restricted to nonzero stretches of alternating signs (single-bead
// configurations). One sign class is tracked; the mirror image contributes
// the factor 2 at extraction.
class CircTable {
public:
    CircTable(const ModelParams& params, int l_max,
              std::size_t mem_budget = dp_memory_budget())
        : beta_(params.beta), l_max_(l_max) {
        if (l_max < 1) throw std::invalid_argument("partition_dp: l_max must be >= 1");
        const std::size_t cells = (static_cast<std::size_t>(l_max) * (l_max + 1)) / 2;
        detail::check_dp_budget(cells * 3 * sizeof(double), mem_budget, "stretch_dp(circ)");

        constexpr double kNegInf = -std::numeric_limits<double>::infinity();
        rows_.resize(l_max + 1);
        std::vector<std::vector<double>> pre(l_max + 1), suf(l_max + 1);
        total_.assign(l_max + 1, kNegInf);

        for (int c = 2; c <= l_max; ++c) {
            std::vector<double> row(c, kNegInf); // index m = 1..c-1
            row[c - 1] = 0.0;
            for (int m = 1; m <= c - 3; ++m) {
                const int src = c - 1 - m;
                const int j = std::min(m, src - 1);
                double contrib = pre[src][j];
                if (j < src - 1) contrib = log_add(contrib, beta_ * m + suf[src][j]);
                row[m] = log_add(row[m], contrib);
            }
            std::vector<double> p(c, kNegInf), s(c, kNegInf);
            double acc = kNegInf;
            for (int m = 1; m < c; ++m) p[m] = acc = log_add(acc, row[m] + beta_ * m);
            acc = kNegInf;
            for (int m = c - 1; m >= 1; --m) {
                s[m] = acc;
                acc = log_add(acc, row[m]);
            }
            total_[c] = acc;
            rows_[c] = std::move(row);
            pre[c] = std::move(p);
            suf[c] = std::move(s);
        }
    }

    double beta() const { return beta_; }
    int l_max() const { return l_max_; }
    // log of the single-bead partition value (both sign classes)
    double log_z_circ(int L) const {
        return L >= 2 ? std::log(2.0) + total_[L]
                      : -std::numeric_limits<double>::infinity();
    }

private:
    double beta_;
    int l_max_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> total_;
};

/// Partition series of the requested variant at lengths 1..l_max.
/// hat_circ / bar_circ are exact linear combinations of the circ values:
///   bar[L] = sum_{t=2}^{L} circ[t]
///   hat[L] = circ[L]/2 + sum_{t=2}^{L-1} circ[t]
inline PartitionSeries stretch_dp(const ModelParams& params, int l_max, Variant variant,
                                  std::size_t mem_budget = dp_memory_budget()) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    PartitionSeries out{variant, params.beta, std::vector<LogWeight>(l_max + 1)};

    if (variant == Variant::full || variant == Variant::c_end) {
        StretchTable table(params, l_max, mem_budget);
        for (int L = 1; L <= l_max; ++L)
            out.values[L] = LogWeight::from_log(variant == Variant::full ? table.log_z(L)
                                                                         : table.log_z_c(L));
        return out;
    }

    CircTable table(params, l_max, mem_budget);
    double running = kNegInf; // sum of circ values up to the current length
    for (int L = 2; L <= l_max; ++L) {
        const double zc = table.log_z_circ(L);
        switch (variant) {
            case Variant::circ:
                out.values[L] = LogWeight::from_log(zc);
                break;
            case Variant::hat_circ:
                out.values[L] = LogWeight::from_log(log_add(zc - std::log(2.0), running));
                break;
            default: // bar_circ
                out.values[L] = LogWeight::from_log(log_add(zc, running));
                break;
        }
        running = log_add(running, zc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact polynomial mode: partition values carried as integer coefficient
// vectors of e^{beta m}. Only a test oracle, so the naive O(l_max^4) kernel
// is fine at the l_max <= 30 cap.
// ---------------------------------------------------------------------------

using BigInt = boost::multiprecision::cpp_int;
using TouchPolynomial = std::vector<BigInt>; // index = self-touching count

inline std::vector<TouchPolynomial> stretch_dp_exact(int l_max) {
    if (l_max < 1 || l_max > 30)
        throw std::invalid_argument("partition_dp: exact mode supports l_max in [1, 30]");
    const auto add_shifted = [](TouchPolynomial& dst, const TouchPolynomial& src, int shift) {
        if (dst.size() < src.size() + shift) dst.resize(src.size() + shift);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i + shift] += src[i];
    };
    // state polynomials F[c][m]
    std::vector<std::vector<TouchPolynomial>> F(l_max + 1);
    std::vector<TouchPolynomial> z(l_max + 1);
    for (int c = 1; c <= l_max; ++c) {
        F[c].resize(c);
        F[c][c - 1] = {BigInt(c - 1 > 0 ? 2 : 1)};
        for (int m = 0; m <= c - 2; ++m) {
            const int src = c - 1 - m;
            for (int m0 = 0; m0 < src; ++m0) {
                const auto& f = F[src][m0];
                if (f.empty()) continue;
                add_shifted(F[c][m], f, 0);
                if (m > 0) add_shifted(F[c][m], f, std::min(m0, m));
            }
        }
        for (int m = 0; m < c; ++m) add_shifted(z[c], F[c][m], 0);
    }
    return z;
}

/// True when the exact-mode polynomial equals an enumeration histogram.
inline bool polynomial_matches_histogram(const TouchPolynomial& poly,
                                         const std::map<int, std::uint64_t>& hist) {
    for (std::size_t m = 0; m < poly.size(); ++m) {
        const auto it = hist.find(static_cast<int>(m));
        const BigInt expected = it == hist.end() ? BigInt(0) : BigInt(it->second);
        if (poly[m] != expected) return false;
    }
    for (const auto& [m, c] : hist)
        if (m >= static_cast<int>(poly.size()) && c != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Renewal identities.
// ---------------------------------------------------------------------------

/// Verifies, for every L <= l_max, that
///   (a) the nonzero-ending partition value equals the bead-renewal
///       convolution  W_L = bar[L] + sum_t W_{L-t} hat[t], and
///   (b) the full value equals sum_{k} W_{L-k} with W_0 := 1 (all-zero tail).
/// Both sides are independent code paths; returns the worst relative error.
inline double renewal_check(const ModelParams& params, int l_max,
                            std::size_t mem_budget = dp_memory_budget()) {
    if (l_max < 2 || l_max > 80)
        throw std::invalid_argument("partition_dp: renewal_check: l_max must be in [2, 80]");
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    StretchTable full(params, l_max, mem_budget);
    const PartitionSeries hat = stretch_dp(params, l_max, Variant::hat_circ, mem_budget);
    const PartitionSeries bar = stretch_dp(params, l_max, Variant::bar_circ, mem_budget);

    std::vector<double> w(l_max + 1, kNegInf);
    double worst = 0.0;
    for (int L = 2; L <= l_max; ++L) {
        double v = bar.values[L].log_value;
        for (int t = 2; t <= L - 2; ++t)
            v = log_add(v, w[L - t] + hat.values[t].log_value);
        w[L] = v;
        worst = std::max(worst, std::abs(std::expm1(v - full.log_z_c(L))));
    }
    // length-ordered tail of zero stretches: Z_L = 1 + sum_{j=2}^{L} W_j
    double acc = 0.0; // log(1), the W_0 convention
    for (int L = 1; L <= l_max; ++L) {
        if (w[L] != kNegInf) acc = log_add(acc, w[L]);
        worst = std::max(worst, std::abs(std::expm1(acc - full.log_z(L))));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Least-squares fit of the asymptotic shape.
// ---------------------------------------------------------------------------

struct AsymptoticsFit {
    double sqrt_coeff; // coefficient of sqrt(L)
    double log_slope;  // coefficient of log(L)
    double intercept;
};

/// Fits log Z_L - beta L  ~  c1 sqrt(L) + g log(L) + c0 over [l_min, l_max].
inline AsymptoticsFit asymptotics_fit(const ModelParams& params, int l_min, int l_max,
                                      std::size_t mem_budget = dp_memory_budget()) {
    if (l_max - l_min < 50)
        throw std::invalid_argument(
            "partition_dp: asymptotics_fit: window too short (l_max - l_min must be >= 50)");
    if (l_min < 2) throw std::invalid_argument("partition_dp: asymptotics_fit: l_min must be >= 2");
    StretchTable table(params, l_max, mem_budget);

    double ata[3][3] = {};
    double atb[3] = {};
    for (int L = l_min; L <= l_max; ++L) {
        const double x[3] = {std::sqrt((double)L), std::log((double)L), 1.0};
        const double y = table.log_z(L) - params.beta * L;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += x[i] * x[j];
            atb[i] += x[i] * y;
        }
    }
    // 3x3 Gaussian elimination with partial pivoting
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = ata[i][j];
        m[i][3] = atb[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        for (int j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
        if (m[col][col] == 0.0)
            throw std::runtime_error("partition_dp: asymptotics_fit: singular normal equations");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

} // namespace ipdsaw
