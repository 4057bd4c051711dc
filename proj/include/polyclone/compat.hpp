#pragma once

#include <polyclone/bignum.hpp>
#include <polyclone/relation.hpp>
#include <polyclone/witness.hpp>

#include <optional>
#include <vector>

namespace polyclone {

// A matrix whose columns are tuples of a relation, up to column order:
// counts[p] is the multiplicity of the relation's p-th tuple.
struct ColumnMultiset
{
    std::vector<BigInt> counts;

    auto total() const -> BigInt;
    auto operator==(const ColumnMultiset &) const -> bool = default;
};

// Count vector of every row of the matrix described by cm.
auto row_counts(const Relation & r, const ColumnMultiset & cm) -> std::vector<CountVector>;

// Row-wise images of op on the matrix described by cm.
auto apply_rows(const SymmetricOp & op, const Relation & r, const ColumnMultiset & cm) -> Tuple;

// True iff cm is a valid multiset of op.arity() columns whose image is not
// in r.
auto is_violation(const SymmetricOp & op, const Relation & r, const ColumnMultiset & cm) -> bool;

// Number of column multisets of size op.arity() over r.
auto multiset_count(const SymmetricOp & op, const Relation & r) -> BigInt;

enum class VerdictMode
{
    exact,
    sampled
};

struct Verdict
{
    VerdictMode mode = VerdictMode::exact;
    bool ok = true;
    BigInt examined = 0;
    std::optional<ColumnMultiset> violation;
    std::optional<std::uint64_t> seed;
};

struct CompatOptions
{
    Budget budget = {};
    unsigned jobs = 1;
};

// Exhaustive scan of all column multisets in lexicographic order of their
// count vectors. The first violation in that order is reported regardless
// of jobs. Throws BudgetExceeded when multiset_count exceeds the budget.
auto check_compat_symmetric(const SymmetricOp & op, const Relation & r, const CompatOptions & options = {}) -> Verdict;

// Uniformly random column multisets. A violation is definitive; ok is only
// evidence.
auto check_compat_sampled(const SymmetricOp & op, const Relation & r, std::uint64_t trials, std::uint64_t seed) -> Verdict;

struct BinaryFallback
{
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

// Two-row case: pairs (u_p, w_p) in a binary relation. Falls back to
// sampling when the exact scan is over budget and fallback.trials > 0.
auto check_compat_binary(const SymmetricOp & op, const Relation & r, const CompatOptions & options = {},
        const BinaryFallback & fallback = {}) -> Verdict;

} // namespace polyclone
