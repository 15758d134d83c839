#ifndef COOPMIMO_RNG_HPP
#define COOPMIMO_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace coopmimo {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small-state generator so that a fresh stream per (frame, block, relay) costs nothing to seed.
// Satisfies UniformRandomBitGenerator, so it plugs into the <random> distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Tags naming the independent random streams of a run. Every draw in the simulator is
// addressed by (master seed, tag, indices...), so any record is reproducible in isolation
// and the worker partition never changes a value.
enum class Stream : std::uint64_t {
    relay_placement = 1,
    random_selection = 2,
    info_bits = 3,
    interleaver = 4,
    source_dest_channel = 5,
    relay_channel = 6,
    relay_noise = 7,
    dest_noise_phase1 = 8,
    dest_noise_phase2 = 9,
};

constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t h = mix64(base);
    for (std::uint64_t p : path) {
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, Stream tag, std::initializer_list<std::uint64_t> path = {}) noexcept
{
    std::uint64_t h = derive_seed(base, {static_cast<std::uint64_t>(tag)});
    for (std::uint64_t p : path) {
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

} // namespace coopmimo

#endif // COOPMIMO_RNG_HPP
