#pragma once

#include <stdexcept>
#include <vector>

#include "spinfp/spin/dynamics.hpp"
#include "spinfp/spin/net.hpp"
#include "spinfp/spin/state.hpp"

namespace spinfp {

// Exhaustive scan of all 2^M states, returning exactly the zero-energy ones.
// Walks a Gray code so each step flips one spin and updates fields in O(M).
inline std::vector<SpinState> enumerate_fixed_points(const RandomNet& net) {
    if (net.m > 20) {
        throw std::invalid_argument("enumerate_fixed_points: M > 20 not supported");
    }
    const int m = net.m;
    std::vector<SpinState> fps;
    SpinState st = all_up(m);
    auto f = detail::fields_from_scratch(net, st.s, nullptr);
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t g = 0;; ++g) {
        bool fixed = true;
        for (int i = 0; i < m; ++i) {
            if (static_cast<double>(st.s[i]) * f[i] < 0.0) {
                fixed = false;
                break;
            }
        }
        if (fixed) fps.push_back(st);
        if (g + 1 == total) break;
        // next Gray code differs in the lowest set bit of g+1
        int b = 0;
        std::uint64_t v = g + 1;
        while (!(v & 1)) {
            v >>= 1;
            ++b;
        }
        st.s[b] = static_cast<std::int8_t>(-st.s[b]);
        detail::apply_flip(net, f, b, st.s[b]);
    }
    return fps;
}

}  // namespace spinfp
