#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pollwait {

// Mixes a seed with a stream id so parallel streams never overlap in practice.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t run_seed, std::uint64_t stream_id) {
    return splitmix64(splitmix64(run_seed) ^ splitmix64(stream_id + 1));
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Inverse transform; 1 - u stays in (0, 1] so log never sees zero.
    double next_exponential(double mean) {
        return -mean * std::log(1.0 - next_unit());
    }

    // Uniform integer in [0, n); n must be positive.
    std::uint64_t next_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
    }

    std::uint64_t next_raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace pollwait
