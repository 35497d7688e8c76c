#pragma once

#include <cstdint>

namespace randlat {

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

inline uint64_t splitmix64_next(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state);
}

// xoshiro256++ keyed by (seed, stream). Distinct streams started from the
// same seed are statistically independent, so replications can run in any
// order (or concurrently) and still reproduce bit-exactly.
class RngStream {
public:
    explicit RngStream(uint64_t seed, uint64_t stream = 0) {
        id_ = detail::mix64(seed ^ 0x9e3779b97f4a7c15ULL) ^
              detail::mix64(stream + 0x6a09e667f3bcc909ULL);
        uint64_t sm = id_;
        for (auto& w : s_) w = splitmix64_next(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1), 53-bit resolution
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // unbiased uniform in [0, bound), bound >= 1 (rejection on the top band)
    uint64_t next_below(uint64_t bound) {
        const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % bound;
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // stable identifier of this stream, recorded for replay
    uint64_t stream_id() const { return id_; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    uint64_t id_;
};

}  // namespace randlat
