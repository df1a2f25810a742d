#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinfp {

// Binary network state (entries are exactly -1 or +1) plus readout fields.
struct SpinState {
    std::vector<std::int8_t> s;
    std::vector<double> z;

    int size() const { return static_cast<int>(s.size()); }

    bool operator==(const SpinState& o) const { return s == o.s && z == o.z; }
};

inline SpinState all_up(int m, int c = 0) {
    SpinState st;
    st.s.assign(m, +1);
    st.z.assign(c, 0.0);
    return st;
}

// Bit-packed spin vector; must stay output-equivalent to the byte path.
struct PackedState {
    int m = 0;
    std::vector<std::uint64_t> bits;  // bit set <=> spin is +1

    static PackedState pack(const std::vector<std::int8_t>& s) {
        PackedState p;
        p.m = static_cast<int>(s.size());
        p.bits.assign((s.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] > 0) p.bits[i >> 6] |= (std::uint64_t{1} << (i & 63));
        }
        return p;
    }

    std::int8_t get(int i) const {
        return (bits[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1 ? +1 : -1;
    }

    void set(int i, std::int8_t v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v > 0)
            bits[static_cast<std::size_t>(i) >> 6] |= mask;
        else
            bits[static_cast<std::size_t>(i) >> 6] &= ~mask;
    }

    std::vector<std::int8_t> unpack() const {
        std::vector<std::int8_t> s(m);
        for (int i = 0; i < m; ++i) s[i] = get(i);
        return s;
    }
};

// Aggregated external contribution to the local fields (input projection,
// readout feedback, clamping) at the current step.
struct ExternalField {
    std::vector<double> h;

    static ExternalField zero(int m) {
        ExternalField f;
        f.h.assign(m, 0.0);
        return f;
    }
};

inline void check_dims(int expected, int got, const char* what) {
    if (expected != got) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

}  // namespace spinfp
