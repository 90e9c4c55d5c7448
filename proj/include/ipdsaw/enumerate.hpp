#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipdsaw {

/// Exhaustive enumeration of all configurations of length L, grouped by
/// self-touching count m: returns m -> number of configurations. The
/// partition value is then sum_m count(m) e^{beta m}, exactly. Exponential in
/// L, so L is capped at 14.
inline std::map<int, std::uint64_t> enumerate_all(int L) {
    if (L < 1 || L > 14)
        throw std::invalid_argument("enumerate: enumerate_all: L must be in [1, 14], got " +
                                    std::to_string(L));
    std::map<int, std::uint64_t> hist;
    // DFS over stretches: budget counts remaining length (each stretch spends
    // 1 + |l|); `last` is the previous stretch value.
    struct Walker {
        std::map<int, std::uint64_t>& hist;
        void go(int budget, int last, int m) {
            if (budget == 0) {
                ++hist[m];
                return;
            }
            for (int mag = 0; mag <= budget - 1; ++mag) {
                if (mag == 0) {
                    go(budget - 1, 0, m);
                    continue;
                }
                const int touch =
                    last != 0 ? std::min(std::abs(last), mag) : 0;
                go(budget - 1 - mag, mag, m + (last < 0 ? touch : 0));
                go(budget - 1 - mag, -mag, m + (last > 0 ? touch : 0));
            }
        }
    } walker{hist};
    walker.go(L, 0, 0);
    return hist;
}

/// Evaluates an enumeration histogram at inverse temperature beta, in log
/// scale: log sum_m count(m) e^{beta m}.
inline double log_partition_from_histogram(const std::map<int, std::uint64_t>& hist,
                                           double beta) {
    double best = -1.0;
    for (const auto& [m, c] : hist) best = std::max(best, beta * m + std::log((double)c));
    double sum = 0.0;
    for (const auto& [m, c] : hist) sum += std::exp(beta * m + std::log((double)c) - best);
    return best + std::log(sum);
}

} // namespace ipdsaw
