#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "spinfp/rng.hpp"
#include "spinfp/spin/net.hpp"
#include "spinfp/spin/state.hpp"

namespace spinfp {

namespace detail {

// f = J s + h, accumulated column by column.
inline std::vector<double> fields_from_scratch(const RandomNet& net,
                                               const std::vector<std::int8_t>& s,
                                               const std::vector<double>* h) {
    const int m = net.m;
    std::vector<double> f(m, 0.0);
    if (h) f = *h;
    for (int k = 0; k < m; ++k) {
        const double* c = net.col(k);
        const double sk = static_cast<double>(s[k]);
        for (int i = 0; i < m; ++i) f[i] += sk * c[i];
    }
    return f;
}

inline void apply_flip(const RandomNet& net, std::vector<double>& f, int k, std::int8_t s_new) {
    const double* c = net.col(k);
    const double d = 2.0 * static_cast<double>(s_new);
    const int m = net.m;
    for (int i = 0; i < m; ++i) f[i] += d * c[i];
}

// per-sweep permutation seed
inline std::uint64_t sweep_seed(std::uint64_t base, std::uint64_t sweep) {
    std::uint64_t x = base + 0x9e3779b97f4a7c15ull * (sweep + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

}  // namespace detail

// f_i = J_D s_i + sum_{k != i} J_ik s_k + h_i
inline std::vector<double> local_fields(const RandomNet& net, const SpinState& st,
                                        const ExternalField& h_ext) {
    check_dims(net.m, st.size(), "local_fields state");
    check_dims(net.m, static_cast<int>(h_ext.h.size()), "local_fields field");
    return detail::fields_from_scratch(net, st.s, &h_ext.h);
}

// Number of neurons whose state disagrees with the sign of their local field
// (autonomous network, no external field). A neuron with exactly zero field
// keeps its state and counts as satisfied. The paper's energy E_J equals twice
// this count, since it adds 1 - s_i sign(f_i) in {0, 2} per neuron.
inline int energy(const RandomNet& net, const SpinState& st) {
    check_dims(net.m, st.size(), "energy state");
    const auto f = detail::fields_from_scratch(net, st.s, nullptr);
    int unsat = 0;
    for (int i = 0; i < net.m; ++i) {
        if (static_cast<double>(st.s[i]) * f[i] < 0.0) ++unsat;
    }
    return unsat;
}

// Synchronous update: candidate s'_i = sign(f_i) (ties keep the current state),
// applied to a uniformly random subset of round(flip_fraction * M) neurons.
// Returns the new state and how many neurons actually changed sign.
inline std::pair<SpinState, int> step_sync(const RandomNet& net, const SpinState& st,
                                           const ExternalField& h_ext, double flip_fraction,
                                           Rng& rng) {
    check_dims(net.m, st.size(), "step_sync state");
    const int m = net.m;
    const auto f = detail::fields_from_scratch(net, st.s, &h_ext.h);
    SpinState out = st;
    int changed = 0;
    auto candidate = [&](int i) -> std::int8_t {
        if (f[i] > 0.0) return +1;
        if (f[i] < 0.0) return -1;
        return st.s[i];
    };
    if (flip_fraction >= 1.0) {
        for (int i = 0; i < m; ++i) {
            const std::int8_t c = candidate(i);
            if (c != st.s[i]) ++changed;
            out.s[i] = c;
        }
    } else {
        const int n_upd = static_cast<int>(std::lround(flip_fraction * m));
        auto perm = rng.permutation(static_cast<std::uint32_t>(m));
        for (int t = 0; t < n_upd; ++t) {
            const int i = static_cast<int>(perm[t]);
            const std::int8_t c = candidate(i);
            if (c != st.s[i]) ++changed;
            out.s[i] = c;
        }
    }
    return {out, changed};
}

// Asynchronous sweep: visit all neurons once in a seeded random permutation,
// updating each in place from the partially updated state.
inline std::pair<SpinState, int> step_async(const RandomNet& net, const SpinState& st,
                                            const ExternalField& h_ext,
                                            std::uint64_t order_seed) {
    check_dims(net.m, st.size(), "step_async state");
    SpinState out = st;
    auto f = detail::fields_from_scratch(net, st.s, &h_ext.h);
    Rng rng(order_seed);
    const auto perm = rng.permutation(static_cast<std::uint32_t>(net.m));
    int changed = 0;
    for (const auto idx : perm) {
        const int i = static_cast<int>(idx);
        std::int8_t c = out.s[i];
        if (f[i] > 0.0) c = +1;
        else if (f[i] < 0.0) c = -1;
        if (c != out.s[i]) {
            out.s[i] = c;
            detail::apply_flip(net, f, i, c);
            ++changed;
        }
    }
    return {out, changed};
}

enum class UpdateMode { kSync, kAsync };

struct RelaxResult {
    SpinState state;
    int iterations = 0;
    bool converged = false;
};

// Iterate the dynamics under a constant external field until the state is
// unchanged across one step (sync) or one full sweep (async), or T_max is
// reached. Non-convergence is a normal outcome.
inline RelaxResult relax(const RandomNet& net, const SpinState& s0, const ExternalField& h_ext,
                         int t_max, UpdateMode mode, std::uint64_t order_seed = 0,
                         double flip_fraction = 1.0) {
    check_dims(net.m, s0.size(), "relax state");
    RelaxResult res;
    res.state = s0;
    if (mode == UpdateMode::kSync) {
        Rng rng(order_seed);
        for (int t = 0; t < t_max; ++t) {
            auto [next, changed] = step_sync(net, res.state, h_ext, flip_fraction, rng);
            ++res.iterations;
            res.state = std::move(next);
            if (changed == 0) {
                res.converged = true;
                break;
            }
        }
        return res;
    }
    // async fast path: fields maintained incrementally across sweeps
    auto f = detail::fields_from_scratch(net, res.state.s, &h_ext.h);
    for (int t = 0; t < t_max; ++t) {
        Rng rng(detail::sweep_seed(order_seed, static_cast<std::uint64_t>(t)));
        const auto perm = rng.permutation(static_cast<std::uint32_t>(net.m));
        int changed = 0;
        for (const auto idx : perm) {
            const int i = static_cast<int>(idx);
            std::int8_t c = res.state.s[i];
            if (f[i] > 0.0) c = +1;
            else if (f[i] < 0.0) c = -1;
            if (c != res.state.s[i]) {
                res.state.s[i] = c;
                detail::apply_flip(net, f, i, c);
                ++changed;
            }
        }
        ++res.iterations;
        if (changed == 0) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace spinfp
