#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace s2c {

/// Fisher-Yates shuffle with explicit index draws. std::shuffle leaves the
/// permutation implementation-defined; this pins it for a given seed.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    seeded_shuffle(items, rng);
}

}  // namespace s2c
