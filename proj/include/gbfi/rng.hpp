#pragma once

#include <array>
#include <cstdint>

namespace gbfi {

struct RngConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Philox4x32-10: stateless counter-based block cipher. One block keyed by
// (seed, stream, step) yields 128 random bits, so any path or thread can
// reproduce its draws from the indices alone.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t step);

// Standard normal draws from consecutive Philox blocks via Box-Muller.
// Deterministic function of (seed, stream, draw index).
class GaussianStream {
public:
    explicit GaussianStream(RngConfig cfg) : seed_(cfg.seed), stream_(cfg.stream) {}

    double next();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t step_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace gbfi
