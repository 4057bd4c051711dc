#pragma once

#include <polyclone/relation.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polyclone {

// Identities imposed on the unknown operation t.
struct Pinning
{
    enum class Kind
    {
        // t(b,a,...,a) = ... = t(a,...,a,b) = b for all a, b
        nu,
        // only t(low,high,...,high) = ... = t(high,...,high,low) = high
        remark
    };

    Kind kind = Kind::nu;
    Element low{};
    Element high{};

    static auto nu() -> Pinning { return {}; }
    static auto remark(Element low, Element high) -> Pinning { return {Kind::remark, low, high}; }
};

struct IndicatorConstraint
{
    std::uint32_t relation; // index into IndicatorInstance::relations
    std::vector<std::uint32_t> scope;

    auto operator<=>(const IndicatorConstraint &) const = default;
};

// The indicator problem of a structure: one variable per k-tuple over the
// domain (numbered as OpTable inputs), whose value is t on that tuple.
struct IndicatorInstance
{
    std::size_t domain_size = 0;
    std::size_t arity = 0;
    Pinning pinning;
    // Per-variable bitmask of allowed values after unary restrictions and pins.
    std::vector<std::uint32_t> domains;
    std::vector<Relation> relations;
    std::vector<std::string> relation_names;
    // One constraint per distinct (relation, row scope) over all column
    // matrices of the relation.
    std::vector<IndicatorConstraint> constraints;
    std::size_t pinned_by_identity = 0;
    std::size_t pinned_constant = 0;

    auto variable_count() const -> std::size_t { return domains.size(); }
};

// Unary relations become domain restrictions: a variable all of whose
// coordinates lie in X may only take values in X.
auto build_indicator(const Structure & structure, std::size_t k, const Pinning & pinning = Pinning::nu(),
        const Budget & budget = {}) -> IndicatorInstance;

enum class SolveStatus
{
    sat,
    unsat,
    unknown
};

auto to_string(SolveStatus s) -> std::string;

struct SolveOptions
{
    std::uint64_t node_limit = 50'000'000;
};

struct SolveResult
{
    SolveStatus status = SolveStatus::unknown;
    std::uint64_t nodes = 0;
    std::optional<OpTable> witness;
};

// Complete backtracking search with generalized arc consistency on every
// table constraint. Smallest domain first, values in ascending order.
auto solve(const IndicatorInstance & instance, const SolveOptions & options = {}) -> SolveResult;

// Re-checks the pinned identities and compatibility with every relation of
// the structure using explicit column matrices only.
auto verify_witness_table(const OpTable & t, const Structure & structure, const Pinning & pinning = Pinning::nu(),
        const Budget & budget = {}) -> bool;

struct DecideReport
{
    std::size_t arity = 0;
    Pinning pinning;
    std::size_t variables = 0;
    std::size_t constraints = 0;
    SolveResult result;
    // Set for sat results: outcome of verify_witness_table.
    std::optional<bool> witness_verified;
};

// Builds and solves the indicator problem. Without fixed_rows the full NU
// identities are pinned.
auto decide_nu(const Structure & structure, std::size_t k, const std::optional<Pinning> & fixed_rows = std::nullopt,
        const SolveOptions & options = {}, const Budget & budget = {}) -> DecideReport;

} // namespace polyclone
