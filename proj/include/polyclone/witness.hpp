#pragma once

#include <polyclone/bignum.hpp>
#include <polyclone/relation.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace polyclone {

// Multiset over an ordered domain: the count of every element.
class CountVector
{
public:
    explicit CountVector(std::size_t domain_size);
    explicit CountVector(std::vector<BigInt> counts);

    static auto from_tuple(std::span<const Element> tuple, std::size_t domain_size) -> CountVector;

    auto domain_size() const -> std::size_t { return _counts.size(); }
    auto count(Element e) const -> const BigInt &;
    auto counts() const -> std::span<const BigInt> { return _counts; }
    auto total() const -> const BigInt & { return _total; }
    auto support_mask() const -> std::uint64_t;

    auto set(Element e, BigInt value) -> void;
    auto add(Element e, const BigInt & delta) -> void;

    auto operator==(const CountVector & other) const -> bool { return _counts == other._counts; }

private:
    std::vector<BigInt> _counts;
    BigInt _total;
};

struct top_t
{
};
// Sentinel above every element: less_count(x, top) is the total.
inline constexpr top_t top{};

// Sum of the counts of elements strictly below r in the domain order.
auto less_count(const CountVector & x, Element r) -> BigInt;
auto less_count(const CountVector & x, top_t) -> BigInt;

enum class Family
{
    A,
    B,
    custom
};

// An operation whose value depends only on the counts of its arguments.
//
// The A and B witnesses are the threshold cascades
//
//   n      if l > T_n * below(n)
//   r      else if below(r+1) > T_r * below(r)      for r = n-1, ..., 0
//   bottom otherwise
//
// where below(r) counts the arguments strictly less than the numeral r,
// T_r = m^(2^r) (m = 2 for B) and l = T_n + 1 is the declared arity. For B,
// bottom is a2 if a2 occurs more often than a1, and a1 otherwise.
class SymmetricOp
{
public:
    using Function = std::function<Element(const CountVector &)>;

    static auto f_A(unsigned n, unsigned m) -> SymmetricOp;
    static auto f_B(unsigned n) -> SymmetricOp;
    static auto from_function(std::size_t domain_size, BigInt arity, Function f) -> SymmetricOp;
    static auto constant(std::size_t domain_size, BigInt arity, Element value) -> SymmetricOp;

    auto family() const -> Family { return _family; }
    auto n() const -> unsigned { return _n; }
    auto m() const -> unsigned { return _m; }
    auto arity() const -> const BigInt & { return _arity; }
    auto domain_size() const -> std::size_t { return _domain_size; }
    // T_r
    auto threshold(unsigned r) const -> const BigInt & { return _thresholds.at(r); }

    // Cascade exactly as defined: the top branch compares with the declared
    // arity, whatever the input's total. Throws UsageError on an empty input.
    auto operator()(const CountVector & x) const -> Element;

    // Cascade with the top branch's arity replaced by the input's total.
    // Coincides with operator() when the total equals the arity.
    auto evaluate_at_total(const CountVector & x) const -> Element;

    // A only: max{r : below(r+1) > T_r * below(r)} with below(n+1) = total,
    // or a when that set is empty.
    auto evaluate_max_form(const CountVector & x) const -> Element;

    // Machine-word evaluation for enumeration loops; counts and the arity
    // must stay below 2^62. Matches operator() (or evaluate_at_total).
    auto evaluate_small(std::span<const std::uint64_t> counts, bool at_total = false) const -> Element;

private:
    SymmetricOp() = default;

    auto check_input(std::size_t domain_size, bool empty) const -> void;
    auto cascade(const CountVector & x, const BigInt & top_bound) const -> Element;

    Family _family = Family::custom;
    unsigned _n = 0;
    unsigned _m = 0;
    std::size_t _domain_size = 0;
    BigInt _arity;
    std::vector<BigInt> _thresholds;
    std::vector<std::uint64_t> _small_thresholds; // T_r capped at 2^62
    std::uint64_t _small_arity = 0;                 // 0 when the arity does not fit
    Function _function;
};

auto f_A(unsigned n, unsigned m, const CountVector & x) -> Element;
auto f_B(unsigned n, const CountVector & x) -> Element;

// op(r,...,r) = r and op(s,...,s,t) = s for all s != t. False below arity 3.
auto is_nu_symmetric(const SymmetricOp & op) -> bool;

struct ConservativityReport
{
    bool conservative = true;
    BigInt examined = 0;
    std::optional<CountVector> counterexample;
};

// Every count vector with total 1..max_total; totals other than the
// declared arity use evaluate_at_total.
auto is_conservative_exhaustive(const SymmetricOp & op, std::uint64_t max_total, const Budget & budget = {})
    -> ConservativityReport;

// Uniformly random count vectors at the declared arity.
auto is_conservative_sampled(const SymmetricOp & op, std::uint64_t trials, std::uint64_t seed) -> ConservativityReport;

// Explicit table of a small-arity symmetric operation.
auto to_table(const SymmetricOp & op, const Budget & budget = {}) -> OpTable;

} // namespace polyclone
