#pragma once

#include <cstdint>
#include <limits>

#include "pgarch/model.hpp"

namespace pgarch {

/// Independent random streams used by the library; part of every derived key.
enum class Stream : std::uint64_t {
    Path = 1,
    Lyapunov = 2,
    Ergodicity = 3,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key of substream `index` (replication, draw, ...) of `stream` under `seed`.
constexpr std::uint64_t derive_key(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept {
    return mix64(mix64(seed ^ 0x243f6a8885a308d3ULL) ^ mix64(static_cast<std::uint64_t>(stream)) ^
                 (index * 0x9e3779b97f4a7c15ULL));
}

/**
 * Counter-based generator: the state is a pure function of (key, year, season),
 * so any observation's draws can be regenerated without replaying the stream.
 * Subsequent calls advance a SplitMix64 sequence, which lets variate
 * generators consume several words per observation.
 */
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t key, std::uint64_t year, std::uint64_t season) noexcept
        : state_(mix64(key ^ mix64(year * 0x9e3779b97f4a7c15ULL + season))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

/// One innovation ε with E{ε}=0, E{ε²}=1.
double draw_epsilon(const InnovationDist& dist, CounterRng& rng);

/// ε for observation (year, season) of the substream `key`.
inline double draw_epsilon(const InnovationDist& dist, std::uint64_t key, std::uint64_t year,
                           std::uint64_t season) {
    CounterRng rng(key, year, season);
    return draw_epsilon(dist, rng);
}

}  // namespace pgarch
