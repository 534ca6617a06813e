#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace qwork {

/// SplitMix64 (Steele, Lea, Flood). Satisfies UniformRandomBitGenerator, and
/// `derive` gives independent streams keyed by an index so results never
/// depend on which thread consumed which stream.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    static constexpr std::string_view name = "splitmix64";

    explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Stream for sub-task `index` of master seed `seed`.
    static constexpr SplitMix64 derive(std::uint64_t seed, std::uint64_t index) noexcept {
        return SplitMix64(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

}  // namespace qwork
