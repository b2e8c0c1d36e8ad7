#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>

namespace opfimb {

/// Derives a decorrelated 64-bit value from `x` (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Child seed for stream `stream_id` of a generator seeded with `seed`:
/// seed XOR mix64(stream_id).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id);

/// Source of 32-bit random words plus the derived distributions every module uses.
///
/// Subclasses only supply next_u32() and spawn(); the distributions are fixed
/// here so a run is reproducible from the word stream alone. Tests substitute
/// a constant-word source to pin interpolation endpoints.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual std::uint32_t next_u32() = 0;

    /// Independent generator for a numbered sub-stream.
    virtual std::unique_ptr<RandomSource> spawn(std::uint64_t stream_id) const = 0;

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). Unbiased (rejection on the top of the 32-bit range).
    std::uint32_t below(std::uint32_t n);
    /// Standard normal deviate, Box-Muller, second value cached.
    double normal();

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = below(static_cast<std::uint32_t>(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// PCG with a 64-bit LCG state and the XSL-RR output permutation (64 -> 32 bits).
class Pcg32 final : public RandomSource {
public:
    explicit Pcg32(std::uint64_t seed);

    std::uint32_t next_u32() override;
    std::unique_ptr<RandomSource> spawn(std::uint64_t stream_id) const override;

    std::uint64_t seed() const { return seed_; }

private:
    static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
    static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

    std::uint64_t seed_;
    std::uint64_t state_ = 0;
};

}  // namespace opfimb
