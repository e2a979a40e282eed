#pragma once

#include <cstdint>
#include <random>

namespace ipf {

using RandomStream = std::mt19937_64;

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based child-seed derivation: the (parent, index) pair fully
// determines the child, so indexed work items can run in any order or
// in parallel and still replay identically.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return mix64(parent ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline RandomStream make_stream(std::uint64_t seed) {
    return RandomStream(mix64(seed));
}

}  // namespace ipf
