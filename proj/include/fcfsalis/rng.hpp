#pragma once

#include <cstdint>

namespace fcfsalis {

// Splittable counter-based generator (splitmix64 core).  Every stream owns a
// hashed start and a distinct odd increment derived from a (seed, replication,
// stream) triple, so replications and the per-replication streams (arrivals,
// types, services, patience) never share state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t start, std::uint64_t increment = kGoldenGamma)
        : state_(start), increment_(increment | 1ULL) {}

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t replication,
                                std::uint64_t stream) {
        std::uint64_t h = mix(seed + kGoldenGamma);
        h = mix(h + replication * 0xBF58476D1CE4E5B9ULL + 1ULL);
        h = mix(h + stream * 0x94D049BB133111EBULL + 1ULL);
        return SplitMix64(h, mix(h + kGoldenGamma));
    }

    std::uint64_t next_u64() {
        state_ += increment_;
        return mix(state_);
    }

    // Uniform draw in [0,1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    std::uint64_t increment_;
};

} // namespace fcfsalis
