#include <polyclone/compositions.hpp>
#include <polyclone/errors.hpp>

#include <algorithm>

namespace polyclone {

auto composition_count(const BigInt & total, std::size_t parts) -> BigInt
{
    if (parts == 0)
        return total == 0 ? 1 : 0;
    return binomial(total + parts - 1, parts - 1);
}

namespace {

auto visit_from(std::size_t pos, std::uint64_t remaining, std::vector<std::uint64_t> & parts,
        const std::function<bool(std::span<const std::uint64_t>)> & visit) -> bool
{
    if (pos + 1 == parts.size()) {
        parts[pos] = remaining;
        return visit(parts);
    }
    for (std::uint64_t c = 0; c <= remaining; ++c) {
        parts[pos] = c;
        if (! visit_from(pos + 1, remaining - c, parts, visit))
            return false;
    }
    return true;
}

} // namespace

auto for_each_composition(std::uint64_t total, std::size_t parts,
        const std::function<bool(std::span<const std::uint64_t>)> & visit) -> bool
{
    if (parts == 0)
        return total == 0 ? visit({}) : true;
    std::vector<std::uint64_t> buffer(parts, 0);
    return visit_from(0, total, buffer, visit);
}

auto sample_composition(const BigInt & total, std::size_t parts, std::mt19937_64 & rng) -> std::vector<BigInt>
{
    if (parts == 0)
        throw UsageError("sample_composition: no parts");
    const BigInt slots = total + parts - 1;
    std::vector<BigInt> bars;
    bars.reserve(parts - 1);
    // Floyd's algorithm for a uniform (parts-1)-subset of [0, slots)
    for (BigInt j = slots - (parts - 1); j < slots; ++j) {
        BigInt candidate = uniform_below(j + 1, rng);
        if (std::find(bars.begin(), bars.end(), candidate) != bars.end())
            bars.push_back(j);
        else
            bars.push_back(std::move(candidate));
    }
    std::sort(bars.begin(), bars.end());

    std::vector<BigInt> result;
    result.reserve(parts);
    BigInt previous = -1;
    for (const auto & b : bars) {
        result.push_back(b - previous - 1);
        previous = b;
    }
    result.push_back(slots - previous - 1);
    return result;
}

} // namespace polyclone
