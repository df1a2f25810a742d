#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "spinfp/rng.hpp"

namespace spinfp {

// Fully connected random network: off-diagonal couplings i.i.d. N(0, 1/M),
// diagonal fixed to the self-coupling j_d. Storage is column-major (j[k*m+i]
// holds J_ik) so that the dynamics can walk columns contiguously; entries are
// drawn in row-major logical order, which pins the matrix for a given seed.
struct RandomNet {
    int m = 0;
    double j_d = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> j;  // column-major M x M

    double entry(int i, int k) const { return j[static_cast<std::size_t>(k) * m + i]; }
    const double* col(int k) const { return j.data() + static_cast<std::size_t>(k) * m; }
};

inline RandomNet make_random_net(int m, double j_d, std::uint64_t seed) {
    RandomNet net;
    net.m = m;
    net.j_d = j_d;
    net.seed = seed;
    net.j.assign(static_cast<std::size_t>(m) * m, 0.0);
    Rng rng(seed);
    const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            net.j[static_cast<std::size_t>(k) * m + i] = (i == k) ? j_d : rng.gaussian(0.0, sigma);
        }
    }
    return net;
}

}  // namespace spinfp
