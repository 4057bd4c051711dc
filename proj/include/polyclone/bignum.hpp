#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace polyclone {

using BigInt = boost::multiprecision::cpp_int;

auto pow_big(const BigInt & base, std::uint64_t exponent) -> BigInt;

// m^(2^r)
auto pow_tower(std::uint64_t m, unsigned r) -> BigInt;

auto binomial(const BigInt & n, std::uint64_t k) -> BigInt;

auto to_decimal(const BigInt & x) -> std::string;

// Accepts only non-negative decimal digits.
auto from_decimal(std::string_view text) -> BigInt;

// Returns true and stores the value when x fits into 64 bits.
auto fits_u64(const BigInt & x) -> bool;

// Uniform integer in [0, bound) built from raw generator words by
// rejection, so the stream of results depends only on the seed.
auto uniform_below(std::uint64_t bound, std::mt19937_64 & rng) -> std::uint64_t;
auto uniform_below(const BigInt & bound, std::mt19937_64 & rng) -> BigInt;

} // namespace polyclone
