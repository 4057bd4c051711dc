#include <polyclone/bignum.hpp>
#include <polyclone/errors.hpp>

#include <cstdlib>

namespace polyclone {

auto pow_big(const BigInt & base, std::uint64_t exponent) -> BigInt
{
    BigInt result = 1, b = base;
    while (exponent > 0) {
        if (exponent & 1u)
            result *= b;
        exponent >>= 1;
        if (exponent > 0)
            b *= b;
    }
    return result;
}

auto pow_tower(std::uint64_t m, unsigned r) -> BigInt
{
    if (r >= 64)
        throw BudgetExceeded("exponent 2^" + std::to_string(r) + " is too large to materialize");
    return pow_big(BigInt(m), std::uint64_t{1} << r);
}

auto binomial(const BigInt & n, std::uint64_t k) -> BigInt
{
    if (k > n)
        return 0;
    BigInt result = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        result *= (n - i);
        result /= (i + 1);
    }
    return result;
}

auto to_decimal(const BigInt & x) -> std::string
{
    return x.str();
}

auto from_decimal(std::string_view text) -> BigInt
{
    if (text.empty())
        throw UsageError("empty decimal string");
    BigInt result = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw UsageError("not a non-negative decimal integer: '" + std::string(text) + "'");
        result *= 10;
        result += c - '0';
    }
    return result;
}

auto fits_u64(const BigInt & x) -> bool
{
    return x >= 0 && x <= std::numeric_limits<std::uint64_t>::max();
}

auto uniform_below(std::uint64_t bound, std::mt19937_64 & rng) -> std::uint64_t
{
    if (bound == 0)
        throw UsageError("uniform_below: empty range");
    // largest multiple of bound that fits, for unbiased rejection
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    for (;;) {
        std::uint64_t v = rng();
        if (v <= limit)
            return v % bound;
    }
}

auto uniform_below(const BigInt & bound, std::mt19937_64 & rng) -> BigInt
{
    if (bound <= 0)
        throw UsageError("uniform_below: empty range");
    if (fits_u64(bound))
        return uniform_below(static_cast<std::uint64_t>(bound), rng);

    const auto bits = msb(bound) + 1;
    const auto words = (bits + 63) / 64;
    const auto top_bits = bits - (words - 1) * 64;
    const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
    for (;;) {
        BigInt v = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t word = rng();
            if (w == 0)
                word &= top_mask;
            v <<= 64;
            v += word;
        }
        if (v < bound)
            return v;
    }
}

auto Budget::from_environment() -> Budget
{
    Budget b;
    if (const char * env = std::getenv("POLYCLONE_BUDGET"); env && *env) {
        BigInt v = from_decimal(env);
        if (! fits_u64(v) || v == 0)
            throw UsageError("POLYCLONE_BUDGET must be a positive 64-bit integer");
        b.max_enumeration = static_cast<std::uint64_t>(v);
        b.max_variables = static_cast<std::uint64_t>(v);
    }
    return b;
}

} // namespace polyclone
