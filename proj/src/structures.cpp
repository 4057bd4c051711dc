#include <polyclone/structures.hpp>

#include <array>
#include <cmath>

using std::size_t;
using std::string;
using std::vector;

namespace polyclone {

namespace {

// Structures list every nonempty unary relation; beyond this the
// 2^|domain| family stops being practical.
constexpr size_t max_structure_domain = 16;

} // namespace

auto SpecA::validate() const -> void
{
    if (m < 2)
        throw UsageError("A family requires m >= 2, got m = " + std::to_string(m));
    if (domain_size() > max_domain_size)
        throw UsageError("A family requires n <= " + std::to_string(max_domain_size - 2));
}

auto SpecB::validate() const -> void
{
    if (domain_size() > max_domain_size)
        throw UsageError("B family requires n <= " + std::to_string(max_domain_size - 3));
}

auto family_a::domain(unsigned n) -> Domain
{
    vector<string> names{"a"};
    for (unsigned r = 0; r <= n; ++r)
        names.push_back(std::to_string(r));
    return Domain(std::move(names));
}

auto family_b::domain(unsigned n) -> Domain
{
    vector<string> names{"a1", "a2"};
    for (unsigned r = 0; r <= n; ++r)
        names.push_back(std::to_string(r));
    return Domain(std::move(names));
}

auto s_name(unsigned i) -> string
{
    return "S_" + std::to_string(i);
}

auto r_name(unsigned i, unsigned j) -> string
{
    return "R_" + std::to_string(i) + "^" + std::to_string(j);
}

auto unary_name(std::uint64_t mask) -> string
{
    return "X_" + std::to_string(mask);
}

auto gen_S(const SpecA & spec, unsigned i) -> Relation
{
    spec.validate();
    if (i > spec.n)
        throw UsageError("S_i requires 0 <= i <= n, got i = " + std::to_string(i));

    using namespace family_a;
    vector<Tuple> tuples;
    const auto m = spec.m;

    // first coordinate ranges over {a,0,...,i-1}, the remaining m over {a,i}
    for (unsigned first = 0; first <= i; ++first) {
        const Element head = first == 0 ? a : numeral(first - 1);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
            if (head == a && bits == (std::uint64_t{1} << m) - 1)
                continue; // (a,i,...,i)
            Tuple t{head};
            for (unsigned p = 0; p < m; ++p)
                t.push_back((bits >> (m - 1 - p) & 1u) ? numeral(i) : a);
            tuples.push_back(std::move(t));
        }
    }
    for (unsigned u = i + 1; u <= spec.n; ++u)
        tuples.emplace_back(m + 1, numeral(u));
    return Relation(m + 1, spec.domain_size(), std::move(tuples));
}

auto gen_R(const SpecA & spec, unsigned i) -> Relation
{
    spec.validate();
    if (i > spec.n)
        throw UsageError("R_i requires 0 <= i <= n, got i = " + std::to_string(i));

    using namespace family_a;
    vector<Tuple> tuples;
    for (unsigned first = 0; first <= i; ++first) {
        const Element head = first == 0 ? a : numeral(first - 1);
        tuples.push_back({head, a});
        tuples.push_back({head, numeral(i)});
    }
    for (unsigned u = i + 1; u <= spec.n; ++u)
        tuples.push_back({numeral(u), numeral(u)});
    return Relation(2, spec.domain_size(), std::move(tuples));
}

auto gen_congruence_A(const SpecA & spec, unsigned i) -> Equivalence
{
    spec.validate();
    if (i < 1 || i > spec.n)
        throw UsageError("congruence A_i|i|...|n requires 1 <= i <= n, got i = " + std::to_string(i));

    using namespace family_a;
    vector<Block> bs;
    Block low{a};
    for (unsigned r = 0; r < i; ++r)
        low.push_back(numeral(r));
    bs.push_back(std::move(low));
    for (unsigned r = i; r <= spec.n; ++r)
        bs.push_back({numeral(r)});
    return Equivalence::from_blocks(spec.domain_size(), bs);
}

auto eq1_factors(const SpecA & spec, unsigned i) -> vector<Relation>
{
    if (i < 1 || i > spec.n)
        throw UsageError("the composition chain requires 1 <= i <= n, got i = " + std::to_string(i));
    vector<Relation> factors;
    for (unsigned j = 0; j < i; ++j)
        factors.push_back(converse(gen_R(spec, j)));
    for (unsigned j = i; j-- > 0;)
        factors.push_back(gen_R(spec, j));
    return factors;
}

auto compose_chain(const vector<Relation> & factors) -> Relation
{
    if (factors.empty())
        throw UsageError("compose_chain: no factors");
    Relation acc = factors.front();
    for (size_t p = 1; p < factors.size(); ++p)
        acc = compose(acc, factors[p]);
    return acc;
}

auto verify_eq1(const SpecA & spec, unsigned i) -> bool
{
    return compose_chain(eq1_factors(spec, i)) == gen_congruence_A(spec, i).relation();
}

auto unary_relations(const Domain & domain) -> vector<NamedRelation>
{
    const auto d = domain.size();
    if (d > max_structure_domain)
        throw BudgetExceeded("structures with more than " + std::to_string(max_structure_domain) +
                " elements would list too many unary relations");
    vector<NamedRelation> result;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask)
        result.push_back({unary_name(mask), Relation::unary(d, mask)});
    return result;
}

auto gen_structure_A(const SpecA & spec) -> Structure
{
    spec.validate();
    auto domain = family_a::domain(spec.n);
    vector<NamedRelation> relations;
    for (unsigned i = 0; i <= spec.n; ++i)
        relations.push_back({s_name(i), gen_S(spec, i)});
    for (auto & u : unary_relations(domain))
        relations.push_back(std::move(u));
    return Structure(std::move(domain), std::move(relations));
}

auto gen_Rij(const SpecB & spec, unsigned i, unsigned j) -> Relation
{
    spec.validate();
    if (i > spec.n)
        throw UsageError("R_i^j requires 0 <= i <= n, got i = " + std::to_string(i));
    if (j != 1 && j != 2)
        throw UsageError("R_i^j requires j in {1,2}, got j = " + std::to_string(j));

    using namespace family_b;
    vector<Element> left{a1, a2};
    for (unsigned r = 0; r < i; ++r)
        left.push_back(numeral(r));
    const std::array<Element, 3> right{a1, a2, numeral(i)};

    vector<Tuple> tuples;
    for (auto x : left)
        for (auto y : right)
            if (! (x == a(j) && y == numeral(i)))
                tuples.push_back({x, y});
    for (unsigned u = i + 1; u <= spec.n; ++u)
        tuples.push_back({numeral(u), numeral(u)});
    return Relation(2, spec.domain_size(), std::move(tuples));
}

auto gen_congruence_B(const SpecB & spec, unsigned i) -> Equivalence
{
    spec.validate();
    if (i < 1 || i > spec.n)
        throw UsageError("congruence B_i|i|...|n requires 1 <= i <= n, got i = " + std::to_string(i));

    using namespace family_b;
    vector<Block> bs;
    Block low{a1, a2};
    for (unsigned r = 0; r < i; ++r)
        low.push_back(numeral(r));
    bs.push_back(std::move(low));
    for (unsigned r = i; r <= spec.n; ++r)
        bs.push_back({numeral(r)});
    return Equivalence::from_blocks(spec.domain_size(), bs);
}

auto eq1_factors_B(const SpecB & spec, unsigned i, const vector<unsigned> & pattern) -> vector<Relation>
{
    if (i < 1 || i > spec.n)
        throw UsageError("the composition chain requires 1 <= i <= n, got i = " + std::to_string(i));
    if (! pattern.empty() && pattern.size() != 2 * size_t{i})
        throw UsageError("j-pattern must have one entry per chain factor (" + std::to_string(2 * i) + ")");
    auto j_at = [&](size_t p) { return pattern.empty() ? 1u : pattern[p]; };

    vector<Relation> factors;
    for (unsigned r = 0; r < i; ++r)
        factors.push_back(converse(gen_Rij(spec, r, j_at(factors.size()))));
    for (unsigned r = i; r-- > 0;)
        factors.push_back(gen_Rij(spec, r, j_at(factors.size())));
    return factors;
}

auto verify_eq1_B(const SpecB & spec, unsigned i, const vector<unsigned> & pattern) -> bool
{
    return compose_chain(eq1_factors_B(spec, i, pattern)) == gen_congruence_B(spec, i).relation();
}

auto gen_structure_B(const SpecB & spec) -> Structure
{
    spec.validate();
    auto domain = family_b::domain(spec.n);
    vector<NamedRelation> relations;
    for (unsigned i = 0; i <= spec.n; ++i)
        for (unsigned j = 1; j <= 2; ++j)
            relations.push_back({r_name(i, j), gen_Rij(spec, i, j)});
    for (auto & u : unary_relations(domain))
        relations.push_back(std::move(u));
    return Structure(std::move(domain), std::move(relations));
}

namespace {

// Refuse to build integers with more than this many bits.
constexpr double max_bound_bits = 1 << 24;

} // namespace

auto upper_bound(unsigned universe, unsigned max_arity) -> BigInt
{
    if (universe < 2)
        throw UsageError("upper bound requires universe size n >= 2, got " + std::to_string(universe));
    if (max_arity < 2)
        throw UsageError("upper bound requires maximum arity m >= 2, got " + std::to_string(max_arity));
    const std::uint64_t base = 2 * std::uint64_t{max_arity} - 2;
    const double bits = std::pow(3.0, universe) * std::log2(static_cast<double>(base));
    if (bits > max_bound_bits)
        throw BudgetExceeded("upper bound has about 2^" + std::to_string(static_cast<int>(std::log2(bits))) + " bits");
    return pow_big(BigInt(base), static_cast<std::uint64_t>(pow_big(3, universe))) / 2 + 1;
}

auto lower_bound(unsigned universe, unsigned max_arity) -> BigInt
{
    if (max_arity >= 3) {
        if (universe < 2)
            throw UsageError("lower bound for m >= 3 requires universe size n >= 2, got " + std::to_string(universe));
        if (universe - 2 >= 64)
            throw BudgetExceeded("lower bound exponent 2^" + std::to_string(universe - 2) + " is too large");
        const double bits = std::ldexp(std::log2(static_cast<double>(max_arity - 1)), static_cast<int>(universe - 2));
        if (bits > max_bound_bits)
            throw BudgetExceeded("lower bound is too large to materialize");
        return pow_tower(max_arity - 1, universe - 2);
    }
    if (max_arity == 2) {
        if (universe < 3)
            throw UsageError("lower bound for m = 2 requires universe size n >= 3, got " + std::to_string(universe));
        if (universe - 3 >= 24)
            throw BudgetExceeded("lower bound exponent 2^" + std::to_string(universe - 3) + " is too large");
        return pow_tower(2, universe - 3);
    }
    throw UsageError("lower bound requires maximum arity m >= 2, got " + std::to_string(max_arity));
}

auto bounds(unsigned universe, unsigned max_arity) -> Bounds
{
    Bounds b{upper_bound(universe, max_arity), std::nullopt, {}};
    try {
        b.lower = lower_bound(universe, max_arity);
    }
    catch (const UsageError & e) {
        b.lower_unavailable = e.what();
    }
    return b;
}

} // namespace polyclone
