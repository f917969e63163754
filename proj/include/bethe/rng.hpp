#pragma once

#include <cstdint>
#include <random>

namespace bethe {

/// Engine used for every stochastic draw. Normal variates come from
/// std::normal_distribution, so streams are reproducible per standard library.
using Rng = std::mt19937_64;

/// Recorded in output metadata so CSV files can be traced to their generator.
inline constexpr const char* kRngName = "mt19937_64+splitmix64-seed-mix";

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stable seed for work item `index` of a batch seeded with `base`. Depends
/// only on the pair, so sequential and threaded runs draw identical streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace bethe
