#include "generators.hpp"

#include <polyclone/indicator.hpp>
#include <polyclone/structures.hpp>
#include <polyclone/witness.hpp>

#include <gtest/gtest.h>

using namespace polyclone;
using namespace polyclone::testing;

namespace {

// Value demanded of t(x) by the identities, if any. Written from the
// definition: x is (b,a,...,a) up to position, or constant.
auto demanded(const Tuple & x, const Pinning & p) -> std::optional<Element>
{
    for (std::size_t pos = 0; pos < x.size(); ++pos) {
        const Element a = x[(pos + 1) % x.size()];
        bool shape = true;
        for (std::size_t q = 0; q < x.size(); ++q)
            if (q != pos && x[q] != a)
                shape = false;
        if (! shape)
            continue;
        if (x[pos] == a)
            return p.kind == Pinning::Kind::nu ? std::optional(a) : std::nullopt;
        if (p.kind == Pinning::Kind::nu || (a == p.high && x[pos] == p.low))
            return a;
    }
    return std::nullopt;
}

auto brute_force_exists(const Structure & s, std::size_t k, const Pinning & p) -> bool
{
    const auto d = s.domain_size();
    OpTable t(k, d);
    const auto inputs = all_tuples(k, d);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (auto v = demanded(inputs[i], p))
            t.set(i, *v);
        else
            free.push_back(i);
    std::vector<std::size_t> digits(free.size(), 0);
    for (;;) {
        for (std::size_t f = 0; f < free.size(); ++f)
            t.set(free[f], element(digits[f]));
        bool ok = true;
        for (const auto & [name, rel] : s.relations())
            if (! compatible_oracle(t, rel)) {
                ok = false;
                break;
            }
        if (ok)
            return true;
        std::size_t q = free.size();
        while (q > 0 && ++digits[q - 1] == d)
            digits[--q] = 0;
        if (q == 0)
            return false;
    }
}

auto random_structure(std::mt19937_64 & rng, std::size_t d) -> Structure
{
    std::vector<std::string> names;
    for (std::size_t e = 0; e < d; ++e)
        names.push_back(std::string(1, static_cast<char>('p' + e)));
    std::vector<NamedRelation> rels;
    const auto count = 1 + rng() % 3;
    for (std::size_t i = 0; i < count; ++i)
        rels.push_back({"R" + std::to_string(i), random_relation(rng, 1 + rng() % 3, d, 0.3 + 0.1 * (rng() % 5))});
    return Structure(Domain(names), rels);
}

} // namespace

TEST(BuildIndicator, Sizes)
{
    const auto a03 = build_indicator(gen_structure_A({0, 3}), 3);
    EXPECT_EQ(a03.variable_count(), 8u);
    EXPECT_EQ(a03.domain_size, 2u);
    EXPECT_EQ(a03.pinned_by_identity, 6u);
    EXPECT_EQ(a03.pinned_constant, 2u);

    const auto a12 = build_indicator(gen_structure_A({1, 2}), 4);
    EXPECT_EQ(a12.variable_count(), 81u);
    EXPECT_EQ(a12.domain_size, 3u);

    const auto b1 = build_indicator(gen_structure_B({1}), 4);
    EXPECT_EQ(b1.variable_count(), 256u);
    EXPECT_EQ(b1.domain_size, 4u);
}

TEST(BuildIndicator, UnaryRestrictionsAndCaps)
{
    // a variable whose coordinates lie in {a,1} may only be a or 1
    const auto inst = build_indicator(gen_structure_A({1, 2}), 3);
    const OpTable shape(3, 3);
    for (std::size_t v = 0; v < inst.variable_count(); ++v) {
        std::uint32_t coords = 0;
        for (auto e : shape.input(v))
            coords |= 1u << index_of(e);
        EXPECT_EQ(inst.domains[v] & ~coords, 0u) << v;
    }
    Budget tiny;
    tiny.max_variables = 50;
    EXPECT_THROW(build_indicator(gen_structure_A({1, 2}), 4, Pinning::nu(), tiny), BudgetExceeded);
    EXPECT_THROW(build_indicator(gen_structure_A({1, 2}), 2), UsageError);
}

TEST(Solve, A03)
{
    const auto s = gen_structure_A({0, 3});
    EXPECT_EQ(solve(build_indicator(s, 3)).status, SolveStatus::unsat);
    const auto sat = solve(build_indicator(s, 4));
    ASSERT_EQ(sat.status, SolveStatus::sat);
    ASSERT_TRUE(sat.witness);
    for (const auto & [name, rel] : s.relations())
        EXPECT_TRUE(is_compatible_table(*sat.witness, rel).compatible) << name;
    EXPECT_TRUE(verify_witness_table(*sat.witness, s));
}

TEST(Solve, EmptyDomainIsUnsatAtOnce)
{
    auto inst = build_indicator(gen_structure_A({0, 3}), 4);
    inst.domains[5] = 0;
    const auto r = solve(inst);
    EXPECT_EQ(r.status, SolveStatus::unsat);
    EXPECT_LE(r.nodes, 1u);
}

TEST(Solve, NodeLimitGivesUnknown)
{
    const auto inst = build_indicator(gen_structure_A({1, 2}), 4);
    const auto r = solve(inst, {1});
    EXPECT_NE(r.status, SolveStatus::sat);
    if (r.status != SolveStatus::unsat)
        EXPECT_EQ(r.status, SolveStatus::unknown);
}

TEST(VerifyWitness, AcceptsExpandedWitnessRejectsFlippedEntry)
{
    const auto s = gen_structure_A({0, 3});
    auto table = to_table(SymmetricOp::f_A(0, 3));
    EXPECT_TRUE(verify_witness_table(table, s));
    // t(0,a,a,a) must be a
    const Tuple pinned{family_a::numeral(0), family_a::a, family_a::a, family_a::a};
    ASSERT_EQ(table(pinned), family_a::a);
    table.set(pinned, family_a::numeral(0));
    EXPECT_FALSE(verify_witness_table(table, s));
}

TEST(Decide, A12BothPinnings)
{
    const auto s = gen_structure_A({1, 2});
    const auto nu = decide_nu(s, 4);
    EXPECT_EQ(nu.result.status, SolveStatus::unsat);
    const auto remark = decide_nu(s, 4, Pinning::remark(family_a::a, family_a::numeral(1)));
    EXPECT_EQ(remark.result.status, SolveStatus::unsat);
    const auto five = decide_nu(s, 5);
    ASSERT_EQ(five.result.status, SolveStatus::sat);
    EXPECT_EQ(five.witness_verified, true);
}

TEST(Decide, B1AtFive)
{
    const auto r = decide_nu(gen_structure_B({1}), 5);
    ASSERT_EQ(r.result.status, SolveStatus::sat);
    EXPECT_EQ(r.witness_verified, true);
    EXPECT_EQ(r.variables, 1024u);
}

TEST(Solve, AgreesWithBruteForce)
{
    std::mt19937_64 rng(5);
    int sat = 0, unsat = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t d = 2 + trial % 2;
        const auto s = random_structure(rng, d);
        Pinning p = Pinning::nu();
        if (rng() % 2) {
            const auto low = rng() % d, high = (low + 1 + rng() % (d - 1)) % d;
            p = Pinning::remark(element(low), element(high));
        }
        if (d == 3 && p.kind == Pinning::Kind::remark)
            p = Pinning::nu(); // 3^24 tables is too many for the oracle
        const bool expected = brute_force_exists(s, 3, p);
        const auto r = solve(build_indicator(s, 3, p));
        ASSERT_NE(r.status, SolveStatus::unknown);
        EXPECT_EQ(r.status == SolveStatus::sat, expected) << trial;
        if (r.witness)
            EXPECT_TRUE(verify_witness_table(*r.witness, s, p));
        (expected ? sat : unsat)++;
    }
    EXPECT_GT(sat, 10);
    EXPECT_GT(unsat, 10);
}
