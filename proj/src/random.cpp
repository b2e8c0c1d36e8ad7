#include "opfimb/random.hpp"

#include <cmath>
#include <numbers>

namespace opfimb {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    return seed ^ mix64(stream_id);
}

double RandomSource::uniform() {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

std::uint32_t RandomSource::below(std::uint32_t n) {
    if (n <= 1) return 0;
    // largest multiple of n representable in 32 bits
    const std::uint64_t span = std::uint64_t{1} << 32;
    const std::uint64_t limit = span - span % n;
    for (;;) {
        const std::uint64_t x = next_u32();
        if (x < limit) return static_cast<std::uint32_t>(x % n);
    }
}

double RandomSource::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // 1 - u lies in (0, 1], so the log is finite
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Pcg32::Pcg32(std::uint64_t seed) : seed_(seed) {
    state_ = 0;
    state_ = state_ * kMultiplier + kIncrement;
    state_ += seed;
    state_ = state_ * kMultiplier + kIncrement;
}

std::uint32_t Pcg32::next_u32() {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + kIncrement;
    const auto xored = static_cast<std::uint32_t>((old >> 32) ^ old);
    const auto rot = static_cast<unsigned>(old >> 59);
    return (xored >> rot) | (xored << ((32u - rot) & 31u));
}

std::unique_ptr<RandomSource> Pcg32::spawn(std::uint64_t stream_id) const {
    return std::make_unique<Pcg32>(derive_seed(seed_, stream_id));
}

}  // namespace opfimb
