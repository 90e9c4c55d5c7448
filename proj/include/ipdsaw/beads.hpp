#pragma once

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "ipdsaw/sampling.hpp"
#include "ipdsaw/trajectory.hpp"

namespace ipdsaw {

/// Decomposition of a trajectory into extended beads: each segment is a
/// (possibly empty) run of zero stretches followed by a maximal run of
/// nonzero stretches with alternating signs. A trajectory whose remainder is
/// all zeros keeps them as trailing_zeros after the last bead.
struct BeadDecomposition {
    std::vector<int> tau;                // cut indices into the stretch list, tau[0] = 0
    std::vector<long long> cum_lengths;  // cumulated bead lengths, starting at 0
    int trailing_zeros = 0;

    int bead_count() const { return static_cast<int>(tau.size()) - 1; }
};

inline BeadDecomposition decompose(const Trajectory& traj) {
    const auto& l = traj.stretches;
    const int n = static_cast<int>(l.size());
    BeadDecomposition out;
    out.tau.push_back(0);
    out.cum_lengths.push_back(0);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && l[j] == 0) ++j;
        if (j == n) { // zero stretches after the last bead
            out.trailing_zeros = n - i;
            break;
        }
        int k = j; // maximal alternating extension of the first nonzero stretch
        while (k + 1 < n && l[k + 1] != 0 && (l[k] > 0) != (l[k + 1] > 0)) ++k;
        long long len = 0;
        for (int t = i; t <= k; ++t) len += 1 + std::abs(l[t]);
        out.tau.push_back(k + 1);
        out.cum_lengths.push_back(out.cum_lengths.back() + len);
        i = k + 1;
    }
    return out;
}

/// Length of the largest bead: max over index runs u..v with strictly
/// alternating signs of sum (1 + |l_i|). A single index is always an
/// admissible run, so any nonempty trajectory scores at least 1 (an all-zero
/// trajectory scores exactly 1 through a single zero stretch).
inline long long i_max(const Trajectory& traj) {
    const auto& l = traj.stretches;
    const int n = static_cast<int>(l.size());
    long long best = n > 0 ? 1 : 0;
    int i = 0;
    while (i < n) {
        if (l[i] == 0) {
            ++i;
            continue;
        }
        int k = i;
        long long len = 1 + std::abs(l[i]);
        while (k + 1 < n && l[k + 1] != 0 && (l[k] > 0) != (l[k + 1] > 0)) {
            ++k;
            len += 1 + std::abs(l[k]);
        }
        best = std::max(best, len);
        i = k + 1;
    }
    return best;
}

/// Empirical distribution of the largest-bead deficit over a sample batch:
/// for each k in the grid, the fraction of trajectories with
/// |I_max| >= L - k.
struct BeadSurvey {
    double beta = 0.0;
    long long length = 0;
    std::vector<long long> k_grid;
    std::vector<double> empirical_prob;
    std::vector<long long> counts;
};

inline BeadSurvey bead_survey(const SampleBatch& batch, const std::vector<long long>& k_grid) {
    if (batch.trajectories.empty())
        throw std::invalid_argument("beads: bead_survey: batch must be nonempty");
    BeadSurvey out;
    out.beta = batch.beta;
    out.length = batch.length;
    out.k_grid = k_grid;
    out.counts.assign(k_grid.size(), 0);
    for (const Trajectory& t : batch.trajectories) {
        const long long im = i_max(t);
        for (std::size_t i = 0; i < k_grid.size(); ++i)
            if (im >= batch.length - k_grid[i]) ++out.counts[i];
    }
    out.empirical_prob.resize(k_grid.size());
    for (std::size_t i = 0; i < k_grid.size(); ++i)
        out.empirical_prob[i] =
            static_cast<double>(out.counts[i]) / static_cast<double>(batch.trajectories.size());
    return out;
}

} // namespace ipdsaw
