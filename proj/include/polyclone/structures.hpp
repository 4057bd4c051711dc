#pragma once

#include <polyclone/bignum.hpp>
#include <polyclone/relation.hpp>

#include <optional>
#include <string>
#include <vector>

namespace polyclone {

// Parameters of the A family: universe {a,0,...,n}, relations S_0..S_n of
// arity m+1.
struct SpecA
{
    unsigned n = 0;
    unsigned m = 2;

    // Throws UsageError on m < 2 or a universe that does not fit.
    auto validate() const -> void;
    // n = 0, m = 2 yields arity-2 "NU" operations; no lower-bound claim.
    auto lower_bound_meaningful() const -> bool { return n > 0 || m > 2; }
    auto domain_size() const -> std::size_t { return n + 2; }
};

// Parameters of the B family: universe {a1,a2,0,...,n}, binary relations.
struct SpecB
{
    unsigned n = 0;

    auto validate() const -> void;
    auto domain_size() const -> std::size_t { return n + 3; }
};

namespace family_a {
    inline constexpr Element a = element(0);
    constexpr auto numeral(unsigned r) -> Element { return element(r + 1); }
    auto domain(unsigned n) -> Domain;
}

namespace family_b {
    inline constexpr Element a1 = element(0);
    inline constexpr Element a2 = element(1);
    constexpr auto numeral(unsigned r) -> Element { return element(r + 2); }
    constexpr auto a(unsigned j) -> Element { return j == 1 ? a1 : a2; }
    auto domain(unsigned n) -> Domain;
}

auto s_name(unsigned i) -> std::string;
auto r_name(unsigned i, unsigned j) -> std::string;
auto unary_name(std::uint64_t mask) -> std::string;

auto gen_S(const SpecA & spec, unsigned i) -> Relation;
// The explicit formula for R_i; equals project(gen_S(spec, i), {0,1}).
auto gen_R(const SpecA & spec, unsigned i) -> Relation;
auto gen_congruence_A(const SpecA & spec, unsigned i) -> Equivalence;

// Factors of R_0^-1 o ... o R_{i-1}^-1 o R_{i-1} o ... o R_0, left to right.
auto eq1_factors(const SpecA & spec, unsigned i) -> std::vector<Relation>;
auto compose_chain(const std::vector<Relation> & factors) -> Relation;
auto verify_eq1(const SpecA & spec, unsigned i) -> bool;

// Every nonempty subset of the domain, named by characteristic bitmask.
auto unary_relations(const Domain & domain) -> std::vector<NamedRelation>;
auto gen_structure_A(const SpecA & spec) -> Structure;

auto gen_Rij(const SpecB & spec, unsigned i, unsigned j) -> Relation;
auto gen_congruence_B(const SpecB & spec, unsigned i) -> Equivalence;
// pattern holds one j in {1,2} per factor of the 2i-factor chain, in chain
// order; an empty pattern means j = 1 throughout.
auto eq1_factors_B(const SpecB & spec, unsigned i, const std::vector<unsigned> & pattern = {}) -> std::vector<Relation>;
auto verify_eq1_B(const SpecB & spec, unsigned i, const std::vector<unsigned> & pattern = {}) -> bool;
auto gen_structure_B(const SpecB & spec) -> Structure;

// Bounds in the (universe size, maximum relation arity) parametrization.
auto upper_bound(unsigned universe, unsigned max_arity) -> BigInt;
auto lower_bound(unsigned universe, unsigned max_arity) -> BigInt;

struct Bounds
{
    BigInt upper;
    std::optional<BigInt> lower;
    // Names the violated hypothesis when lower is absent.
    std::string lower_unavailable;
};

auto bounds(unsigned universe, unsigned max_arity) -> Bounds;

} // namespace polyclone
