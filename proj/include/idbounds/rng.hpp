#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace idbounds {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based key for (seed, stream, index): each component passes through its
// own splitmix round so distinct triples give unrelated engine states.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// xoshiro256**; satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t key = 0) { reseed(key); }
    Xoshiro256(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) { reseed(derive_key(seed, stream, index)); }

    void reseed(std::uint64_t key) {
        for (auto& w : s_) w = splitmix64(key);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    // Uniform on (0, 1), safe for logarithms.
    double uniform_pos() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
    double exponential() { return -std::log(uniform_pos()); }
    inline double normal();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    double normal_slow(std::uint64_t bits);

    std::array<std::uint64_t, 4> s_{};
};

namespace detail {
struct ZigTables {
    double x[129];
    double r[128];
    ZigTables();
};
extern const ZigTables kZig;
} // namespace detail

// 128-layer ziggurat; a single 64-bit draw supplies both the layer (low 7 bits)
// and the signed abscissa (top 53 bits).
inline double Xoshiro256::normal() {
    std::uint64_t bits = (*this)();
    int i = static_cast<int>(bits & 0x7F);
    double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
    if (std::fabs(u) < detail::kZig.r[i]) return u * detail::kZig.x[i];
    return normal_slow(bits);
}

} // namespace idbounds
