#pragma once

#include <polyclone/errors.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polyclone {

// Index into an ordered domain. The numeric order is the domain's linear
// order (a < 0 < 1 < ... for the A family, a1 < a2 < 0 < ... for B).
enum class Element : std::uint8_t
{
};

constexpr auto index_of(Element e) -> std::size_t
{
    return static_cast<std::size_t>(e);
}

constexpr auto element(std::size_t i) -> Element
{
    return static_cast<Element>(i);
}

using Tuple = std::vector<Element>;

inline constexpr std::size_t max_domain_size = 32;

// Display names for the elements of a domain, in order.
class Domain
{
public:
    explicit Domain(std::vector<std::string> names);

    auto size() const -> std::size_t { return _names.size(); }
    auto name(Element e) const -> const std::string &;
    auto names() const -> const std::vector<std::string> & { return _names; }
    auto find(std::string_view name) const -> std::optional<Element>;
    auto parse(std::string_view name) const -> Element;

    auto operator==(const Domain &) const -> bool = default;

private:
    std::vector<std::string> _names;
};

// A finite set of equal-length tuples, stored sorted and without duplicates.
class Relation
{
public:
    Relation(std::size_t arity, std::size_t domain_size, std::vector<Tuple> tuples = {});

    static auto identity(std::size_t domain_size) -> Relation;
    static auto full(std::size_t domain_size, std::size_t arity) -> Relation;
    // Unary relation with characteristic bitmask `mask`.
    static auto unary(std::size_t domain_size, std::uint64_t mask) -> Relation;

    auto arity() const -> std::size_t { return _arity; }
    auto domain_size() const -> std::size_t { return _domain_size; }
    auto size() const -> std::size_t { return _tuples.size(); }
    auto empty() const -> bool { return _tuples.empty(); }
    auto tuples() const -> std::span<const Tuple> { return _tuples; }
    auto contains(std::span<const Element> t) const -> bool;

    // Bitmask of the elements occurring in a unary relation.
    auto unary_mask() const -> std::uint64_t;

    auto operator==(const Relation &) const -> bool = default;

private:
    std::size_t _arity;
    std::size_t _domain_size;
    std::vector<Tuple> _tuples;
};

// (x,z) in the result iff there is y with (x,y) in p and (y,z) in q.
auto compose(const Relation & p, const Relation & q) -> Relation;
auto converse(const Relation & r) -> Relation;
auto project(const Relation & r, std::span<const std::size_t> coords) -> Relation;

auto is_equivalence(const Relation & r) -> bool;

using Block = std::vector<Element>;

// Blocks ordered by least element. Throws UsageError if r is not an
// equivalence.
auto blocks(const Relation & r) -> std::vector<Block>;

class Equivalence
{
public:
    static auto from_relation(Relation r) -> Equivalence;
    static auto from_blocks(std::size_t domain_size, const std::vector<Block> & blocks) -> Equivalence;

    auto relation() const -> const Relation & { return _relation; }
    auto blocks() const -> const std::vector<Block> & { return _blocks; }
    auto domain_size() const -> std::size_t { return _relation.domain_size(); }

    auto operator==(const Equivalence & other) const -> bool { return _relation == other._relation; }

private:
    Equivalence(Relation r, std::vector<Block> b) : _relation(std::move(r)), _blocks(std::move(b)) {}

    Relation _relation;
    std::vector<Block> _blocks;
};

struct NamedRelation
{
    std::string name;
    Relation relation;
};

class Structure
{
public:
    Structure(Domain domain, std::vector<NamedRelation> relations);

    auto domain() const -> const Domain & { return _domain; }
    auto domain_size() const -> std::size_t { return _domain.size(); }
    auto relations() const -> std::span<const NamedRelation> { return _relations; }
    auto find(std::string_view name) const -> const Relation *;
    auto at(std::string_view name) const -> const Relation &;

private:
    Domain _domain;
    std::vector<NamedRelation> _relations;
};

// Explicit operation table. Inputs are indexed in mixed radix with the
// first argument most significant.
class OpTable
{
public:
    OpTable(std::size_t arity, std::size_t domain_size);
    OpTable(std::size_t arity, std::size_t domain_size, std::vector<Element> values);

    auto arity() const -> std::size_t { return _arity; }
    auto domain_size() const -> std::size_t { return _domain_size; }
    auto input_count() const -> std::size_t { return _values.size(); }

    auto index(std::span<const Element> args) const -> std::size_t;
    auto input(std::size_t index) const -> Tuple;

    auto operator()(std::span<const Element> args) const -> Element { return _values[index(args)]; }
    auto at(std::size_t index) const -> Element { return _values[index]; }
    auto set(std::size_t index, Element value) -> void;
    auto set(std::span<const Element> args, Element value) -> void { set(index(args), value); }
    auto values() const -> std::span<const Element> { return _values; }

    auto operator==(const OpTable &) const -> bool = default;

private:
    std::size_t _arity;
    std::size_t _domain_size;
    std::vector<Element> _values;
};

struct TableCompatibility
{
    bool compatible = true;
    // Columns of a violating matrix; each column is a tuple of the relation.
    std::optional<std::vector<Tuple>> counterexample;
};

// Exhaustive check over all |R|^k column matrices. Throws BudgetExceeded
// when |R|^k exceeds the budget.
auto is_compatible_table(const OpTable & t, const Relation & r, const Budget & budget = {}) -> TableCompatibility;

} // namespace polyclone
