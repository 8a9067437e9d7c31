#ifndef QBSC_RANDOM_HPP
#define QBSC_RANDOM_HPP

#include <cstdint>

namespace qbsc {

/// Deterministic 64-bit generator (splitmix64). Same seed and draw sequence
/// give the same outputs on every platform; std:: distributions are avoided
/// for that reason. Independent streams come from derive(), which mixes tags
/// into the original seed, so (session, purpose) pairs never share a sequence.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : base_(seed), state_(mix(seed)) {}

    /// Stream derived from this source's seed and up to two tags; independent
    /// of how many draws this source has produced.
    RandomSource derive(std::uint64_t tag_a, std::uint64_t tag_b = 0) const {
        std::uint64_t s = base_;
        s = mix(s ^ (0x9e3779b97f4a7c15ULL + tag_a));
        s = mix(s ^ (0xbf58476d1ce4e5b9ULL + tag_b));
        return RandomSource(s);
    }

    std::uint64_t seed() const { return base_; }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); unbiased via rejection on a power-of-two mask.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~0ULL >> __builtin_clzll(n - 1);
        for (;;) {
            const std::uint64_t r = next_u64() & mask;
            if (r < n) return r;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t state_;
};

} // namespace qbsc

#endif
