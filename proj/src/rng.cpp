#include "idbounds/rng.hpp"

namespace idbounds {

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s = k ^ (stream * 0xD1B54A32D192ED03ULL);
    k = splitmix64(s);
    s = k ^ (index * 0xABC98388FB8FAC03ULL);
    return splitmix64(s);
}

namespace detail {

namespace {
constexpr double kZigR = 3.442619855899;
constexpr double kZigV = 9.91256303526217e-3;
} // namespace

ZigTables::ZigTables() {
    double f = std::exp(-0.5 * kZigR * kZigR);
    x[0] = kZigV / f; // base strip including the tail
    x[1] = kZigR;
    x[128] = 0.0;
    for (int i = 2; i < 128; ++i) {
        x[i] = std::sqrt(-2.0 * std::log(kZigV / x[i - 1] + f));
        f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < 128; ++i) r[i] = x[i + 1] / x[i];
}

const ZigTables kZig;

} // namespace detail

double Xoshiro256::normal_slow(std::uint64_t bits) {
    const auto& z = detail::kZig;
    for (;;) {
        int i = static_cast<int>(bits & 0x7F);
        double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
        if (std::fabs(u) < z.r[i]) return u * z.x[i];
        if (i == 0) {
            // tail beyond R (Marsaglia)
            double xt, yt;
            do {
                xt = std::log(uniform_pos()) / z.x[1];
                yt = std::log(uniform_pos());
            } while (-2.0 * yt < xt * xt);
            return u < 0.0 ? xt - z.x[1] : z.x[1] - xt;
        }
        double xv = u * z.x[i];
        double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - xv * xv));
        double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - xv * xv));
        if (f1 + uniform() * (f0 - f1) < 1.0) return xv;
        bits = (*this)();
    }
}

} // namespace idbounds
