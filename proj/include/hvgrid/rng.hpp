#pragma once

#include <cstdint>
#include <vector>

namespace hvgrid {

// splitmix64 finalizer step. Stateless, high quality for seeding purposes.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based sub-seed derivation: every (seed, stream, counter) triple maps
// to an independent 64-bit seed, so parallel consumers never share state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Minimal deterministic generator over the splitmix64 sequence.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Unbiased integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t bounded(std::uint64_t n) {
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Uniform sample of m distinct values from [0, n), partial Fisher-Yates.
// Returned indices are in draw order; callers treating them as a set get
// the uniform distribution over m-subsets.
inline std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t m,
                                                             SplitMix64& rng) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::uint32_t> out;
    out.reserve(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        std::uint32_t j = i + static_cast<std::uint32_t>(rng.bounded(n - i));
        std::uint32_t tmp = pool[i];
        pool[i] = pool[j];
        pool[j] = tmp;
        out.push_back(pool[i]);
    }
    return out;
}

} // namespace hvgrid
