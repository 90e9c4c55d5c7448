#pragma once

#include <cstdlib>
#include <vector>

namespace ipdsaw {

/// A polymer configuration as its sequence of signed vertical stretch
/// lengths; a configuration with N stretches and total stretch length S
/// describes a polymer of length L = S + N.
struct Trajectory {
    std::vector<int> stretches;

    int horizontal_extension() const { return static_cast<int>(stretches.size()); }

    long long total_length() const {
        long long L = static_cast<long long>(stretches.size());
        for (int s : stretches) L += std::abs(s);
        return L;
    }
};

/// Self-touching count: sum over consecutive stretch pairs of
/// min(|x|,|y|) if the pair has opposite signs, 0 otherwise. The energy of
/// the configuration is beta times this integer.
inline long long hamiltonian(const Trajectory& traj) {
    long long m = 0;
    for (std::size_t i = 0; i + 1 < traj.stretches.size(); ++i) {
        const int x = traj.stretches[i];
        const int y = traj.stretches[i + 1];
        if ((x < 0 && y > 0) || (x > 0 && y < 0))
            m += std::min(std::abs(x), std::abs(y));
    }
    return m;
}

} // namespace ipdsaw
