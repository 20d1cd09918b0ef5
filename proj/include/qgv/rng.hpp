#ifndef QGV_RNG_HPP
#define QGV_RNG_HPP

#include <cstdint>

namespace qgv {

/// SplitMix64: fully specified 64-bit generator, identical output on every
/// platform. Campaign runs draw from streams derived with derive_stream so
/// results do not depend on execution order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Mixes (seed, stream index) into an independent starting state.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace qgv

#endif
