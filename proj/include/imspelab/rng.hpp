#ifndef IMSPELAB_RNG_HPP
#define IMSPELAB_RNG_HPP

#include <cstdint>
#include <random>

namespace imspelab {

// Stream-splitting rule (documented contract, stable across platforms):
// substream k of master seed s is a std::mt19937_64 seeded with
// splitmix64(s + (k+1) * 0x9E3779B97F4A7C15), i.e. the (k+1)-th output of the
// splitmix64 sequence started at s. Uniform doubles come from the top 53 bits
// of each 64-bit draw, never from std::uniform_real_distribution (whose
// output is implementation-defined).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s =
        splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return std::mt19937_64(s);
}

// Uniform on [0, 1), 53-bit resolution.
inline double u01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on [-1, 1).
inline double u11(std::mt19937_64& g) { return -1.0 + 2.0 * u01(g); }

} // namespace imspelab

#endif
