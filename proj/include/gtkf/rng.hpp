// Seed derivation for independent, reproducible random substreams.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gtkf {

using Rng = std::mt19937_64;

/// Substream tags. Changing one stream's consumption never shifts another's.
enum class Stream : std::uint64_t {
    InitialState = 1,
    ProcessNoise = 2,
    MeasurementNoise = 3,
    AttackPattern = 4,
    Bias = 5,
    SamplingMatrix = 6,
};

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Mixes a master seed with any number of indices (run, window, stream, ...).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(master);
    for (auto p : parts) {
        h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

[[nodiscard]] inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t run = 0, std::uint64_t sub = 0) {
    return Rng(derive_seed(master, {static_cast<std::uint64_t>(stream), run, sub}));
}

} // namespace gtkf
