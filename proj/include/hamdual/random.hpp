#pragma once

#include <cstdint>
#include <random>

namespace hamdual {

/// SplitMix64 finalizer; used to derive independent per-case seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for case `index` of stream `stream` under a run seed.
std::uint64_t case_seed(std::uint64_t run_seed, std::uint64_t stream, std::uint64_t index);

/// Portable random source: std::mt19937_64 raw output (fixed by the standard)
/// mapped to doubles by hand, so samples agree across standard libraries.
///   uniform01: (x >> 11) * 2^-53
///   normal:    Box-Muller on two uniforms, cosine branch only
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace hamdual
