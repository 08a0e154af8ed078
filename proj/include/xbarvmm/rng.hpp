#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace xbarvmm {

// All randomness in a run flows from one root seed through named substreams,
// so device sampling, shuffling and weight init can be varied independently.
// Uniform and normal draws are mapped explicitly from raw engine output;
// std::*_distribution is avoided because its sequences are
// implementation-defined and results must be reproducible byte-for-byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t root_seed, std::string_view label,
                         std::uint64_t index = 0);

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1), 53-bit resolution
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Box-Muller, cosine branch only: every call consumes exactly two
    // engine outputs, keeping draw positions independent of call history.
    double normal01() {
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;        // [0, 1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // [0, n); modulo bias is below 2^-53 for the n used here
    std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        // Fisher-Yates with explicit index mapping (std::shuffle draws are
        // implementation-defined)
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

inline Rng Rng::substream(std::uint64_t root_seed, std::string_view label,
                          std::uint64_t index) {
    std::uint64_t key = detail::splitmix64(root_seed ^ detail::fnv1a64(label));
    return Rng(detail::splitmix64(key + 0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace xbarvmm
