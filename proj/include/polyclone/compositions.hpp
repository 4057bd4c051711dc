#pragma once

#include <polyclone/bignum.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace polyclone {

// Number of ways to write `total` as an ordered sum of `parts` non-negative
// integers: C(total + parts - 1, parts - 1).
auto composition_count(const BigInt & total, std::size_t parts) -> BigInt;

// Visits every composition of `total` into `parts` parts in lexicographic
// order of the part vector. The callback returns false to stop early.
// Returns false iff stopped.
auto for_each_composition(std::uint64_t total, std::size_t parts,
        const std::function<bool(std::span<const std::uint64_t>)> & visit) -> bool;

// Uniformly random composition: the parts - 1 bar positions among
// total + parts - 1 slots are drawn as a uniform random subset.
auto sample_composition(const BigInt & total, std::size_t parts, std::mt19937_64 & rng) -> std::vector<BigInt>;

} // namespace polyclone
