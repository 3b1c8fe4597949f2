#include "gbfi/rng.hpp"

#include <cmath>
#include <numbers>

namespace gbfi {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u; // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u; // sqrt(3) - 1

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * c[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t step) {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(step),
        static_cast<std::uint32_t>(step >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
    };
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

double GaussianStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    auto bits = philox4x32(seed_, stream_, step_++);
    std::uint64_t u = (static_cast<std::uint64_t>(bits[0]) << 32) | bits[1];
    std::uint64_t v = (static_cast<std::uint64_t>(bits[2]) << 32) | bits[3];
    // u1 in (0, 1] so the log is finite; u2 in [0, 1)
    double u1 = static_cast<double>((u >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(v >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

} // namespace gbfi
