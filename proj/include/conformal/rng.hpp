#pragma once

#include <cstdint>

namespace conformal {

// Deterministic pseudo-random stream (xoshiro256++ seeded through splitmix64).
// Substreams derived from (seed, index) are reproducible independently of
// call order or scheduling, which keeps parallel experiments byte-stable.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();
    double next_uniform();                    // [0, 1), 53-bit resolution
    double next_open01();                     // (0, 1)
    double next_normal();                     // standard normal, inverse-CDF
    double next_in(double lo, double hi);     // uniform on [lo, hi)

private:
    std::uint64_t s_[4];
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Source of the tie-breaking uniforms consumed by smoothed p-values. One
// substream per test object keeps concurrent runs schedule-independent.
class SmoothingTape {
public:
    explicit SmoothingTape(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    RngStream substream(std::uint64_t index) const { return RngStream(mix_seed(seed_, index)); }

private:
    std::uint64_t seed_;
};

// Inverse standard normal CDF for u in (0, 1); rational approximation refined
// to near machine precision (absolute error far below 1e-8).
double normal_quantile(double u);
double normal_cdf(double z);

}  // namespace conformal
