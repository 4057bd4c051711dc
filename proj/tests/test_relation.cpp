#include "generators.hpp"

#include <polyclone/bignum.hpp>
#include <polyclone/compositions.hpp>
#include <polyclone/serialize.hpp>
#include <polyclone/structures.hpp>
#include <polyclone/witness.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <set>

using namespace polyclone;
using namespace polyclone::testing;

namespace {

auto pairs(std::size_t d, std::initializer_list<std::pair<unsigned, unsigned>> ps) -> Relation
{
    std::vector<Tuple> t;
    for (auto [x, y] : ps)
        t.push_back({element(x), element(y)});
    return Relation(2, d, t);
}

// elements of A(n,m) by name
auto A(unsigned n, std::initializer_list<const char *> names) -> Tuple
{
    const auto dom = family_a::domain(n);
    Tuple t;
    for (auto s : names)
        t.push_back(dom.parse(s));
    return t;
}

} // namespace

TEST(Domain, NamesFollowTheLinearOrders)
{
    EXPECT_EQ(family_a::domain(2).names(), (std::vector<std::string>{"a", "0", "1", "2"}));
    EXPECT_EQ(family_b::domain(1).names(), (std::vector<std::string>{"a1", "a2", "0", "1"}));
    EXPECT_THROW(family_a::domain(2).parse("3"), UsageError);
    EXPECT_THROW(Domain({"x", "x"}), UsageError);
}

TEST(Relation, SortedSetSemantics)
{
    Relation r(2, 3, {{element(2), element(0)}, {element(0), element(1)}, {element(2), element(0)}});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.tuples()[0], (Tuple{element(0), element(1)}));
    EXPECT_TRUE(r.contains(Tuple{element(2), element(0)}));
    EXPECT_FALSE(r.contains(Tuple{element(0), element(0)}));
    EXPECT_THROW(Relation(2, 3, {{element(3), element(0)}}), UsageError);
    EXPECT_THROW(Relation(2, 3, {{element(0)}}), UsageError);
}

TEST(Relation, ComposeWithIdentity)
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + rng() % 6;
        const auto r = random_relation(rng, 2, d);
        const auto delta = Relation::identity(d);
        EXPECT_EQ(compose(delta, r), r);
        EXPECT_EQ(compose(r, delta), r);
    }
}

TEST(Relation, ComposeIsPStepThenQStep)
{
    const auto p = pairs(3, {{0, 1}});
    const auto q = pairs(3, {{1, 2}});
    EXPECT_EQ(compose(p, q), pairs(3, {{0, 2}}));
    EXPECT_TRUE(compose(q, p).empty());
    EXPECT_THROW(compose(Relation::full(3, 3), q), UsageError);
}

TEST(Relation, ComposeConverseR0OnA12)
{
    // R_0 = {a} x {a,0} plus (1,1)
    const SpecA spec{1, 2};
    const auto r0 = gen_R(spec, 0);
    EXPECT_EQ(r0, pairs(3, {{0, 0}, {0, 1}, {2, 2}}));
    const auto c = compose(converse(r0), r0);
    EXPECT_TRUE(c.contains(A(1, {"a", "0"})));
    EXPECT_TRUE(c.contains(A(1, {"0", "a"})));
}

TEST(Relation, ChainForN2I1IsTheEquivalence)
{
    const SpecA spec{2, 2};
    const auto chain = compose_chain(eq1_factors(spec, 1));
    ASSERT_TRUE(is_equivalence(chain));
    const auto bs = blocks(chain);
    ASSERT_EQ(bs.size(), 3u);
    EXPECT_EQ(bs[0], (Block{family_a::a, family_a::numeral(0)}));
    EXPECT_EQ(bs[1], (Block{family_a::numeral(1)}));
    EXPECT_EQ(bs[2], (Block{family_a::numeral(2)}));
}

TEST(Relation, ConverseInvolutionAndExample)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = random_relation(rng, 2, 1 + rng() % 6);
        EXPECT_EQ(converse(converse(r)), r);
    }
    EXPECT_EQ(converse(Relation::identity(4)), Relation::identity(4));

    // converse of R_2 on A_4: {a,2} x {a,0,1} plus (3,3)
    const auto conv = converse(gen_R(SpecA{3, 2}, 2));
    std::vector<Tuple> expected;
    for (auto x : {"a", "2"})
        for (auto y : {"a", "0", "1"})
            expected.push_back(A(3, {x, y}));
    expected.push_back(A(3, {"3", "3"}));
    EXPECT_EQ(conv, Relation(2, 5, expected));
    EXPECT_THROW(converse(Relation::full(2, 3)), UsageError);
}

TEST(Relation, ComposeIsAssociative)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + rng() % 6;
        const auto p = random_relation(rng, 2, d), q = random_relation(rng, 2, d), r = random_relation(rng, 2, d);
        EXPECT_EQ(compose(compose(p, q), r), compose(p, compose(q, r)));
    }
}

TEST(Relation, ComposeMatchesBruteForce)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + rng() % 6;
        const auto p = random_relation(rng, 2, d), q = random_relation(rng, 2, d);
        std::vector<Tuple> out;
        for (const auto & x : p.tuples())
            for (const auto & y : q.tuples())
                if (x[1] == y[0])
                    out.push_back({x[0], y[1]});
        EXPECT_EQ(compose(p, q), Relation(2, d, out));
    }
}

TEST(Relation, Project)
{
    for (unsigned n = 0; n <= 4; ++n)
        for (unsigned m = 2; m <= 4; ++m)
            for (unsigned i = 0; i <= n; ++i) {
                const std::size_t first_two[] = {0, 1};
                EXPECT_EQ(project(gen_S({n, m}, i), first_two), gen_R({n, m}, i)) << n << m << i;
            }

    std::mt19937_64 rng(5);
    const auto r = random_relation(rng, 3, 3);
    const std::size_t all[] = {0, 1, 2};
    EXPECT_EQ(project(r, all), r);

    // S_0 of A(1,2) onto its first coordinate: {a, 1}
    const std::size_t first[] = {0};
    EXPECT_EQ(project(gen_S({1, 2}, 0), first), Relation(1, 3, {A(1, {"a"}), A(1, {"1"})}));
    const std::size_t bad[] = {3};
    EXPECT_THROW(project(r, bad), UsageError);
}

TEST(Relation, EquivalenceAndBlocks)
{
    EXPECT_TRUE(is_equivalence(Relation::identity(4)));
    EXPECT_EQ(blocks(Relation::identity(4)).size(), 4u);
    EXPECT_TRUE(is_equivalence(Relation::full(4, 2)));
    EXPECT_EQ(blocks(Relation::full(4, 2)).size(), 1u);
    for (unsigned n = 1; n <= 4; ++n)
        for (unsigned i = 0; i < n; ++i)
            EXPECT_FALSE(is_equivalence(gen_R({n, 2}, i)));
    EXPECT_THROW(blocks(gen_R({2, 2}, 0)), UsageError);

    const auto e = Equivalence::from_blocks(4, {{element(2), element(0)}, {element(1)}, {element(3)}});
    EXPECT_EQ(e.blocks()[0], (Block{element(0), element(2)}));
    EXPECT_EQ(Equivalence::from_relation(e.relation()), e);
}

TEST(Relation, StructureLookup)
{
    const auto s = gen_structure_A({1, 2});
    EXPECT_NE(s.find("S_1"), nullptr);
    EXPECT_EQ(s.find("S_7"), nullptr);
    EXPECT_THROW(s.at("S_7"), UsageError);
    EXPECT_THROW(Structure(family_a::domain(1), {{"bad", Relation::identity(2)}}), UsageError);
}

TEST(OpTable, MixedRadixFirstArgumentMostSignificant)
{
    OpTable t(3, 3);
    EXPECT_EQ(t.input_count(), 27u);
    EXPECT_EQ(t.index(Tuple{element(1), element(0), element(0)}), 9u);
    EXPECT_EQ(t.input(5), (Tuple{element(0), element(1), element(2)}));
    for (std::size_t i = 0; i < t.input_count(); ++i)
        EXPECT_EQ(t.index(t.input(i)), i);
}

TEST(Compatibility, ProjectionIsCompatibleWithEverything)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 2 + rng() % 2, k = 2 + rng() % 2, arity = 1 + rng() % 3;
        OpTable proj(k, d);
        for (std::size_t i = 0; i < proj.input_count(); ++i)
            proj.set(i, proj.input(i)[0]);
        EXPECT_TRUE(is_compatible_table(proj, random_relation(rng, arity, d)).compatible);
    }
}

TEST(Compatibility, MajorityAgainstNotAllEqual)
{
    // majority on {0,1} and the ternary not-all-equal relation
    OpTable maj(3, 2);
    for (std::size_t i = 0; i < 8; ++i) {
        const auto x = maj.input(i);
        const int ones = std::count(x.begin(), x.end(), element(1));
        maj.set(i, element(ones >= 2 ? 1 : 0));
    }
    std::vector<Tuple> nae;
    for (const auto & t : all_tuples(3, 2))
        if (! (t[0] == t[1] && t[1] == t[2]))
            nae.push_back(t);
    const Relation r(3, 2, nae);
    const auto verdict = is_compatible_table(maj, r);
    EXPECT_EQ(verdict.compatible, compatible_oracle(maj, r));
    EXPECT_FALSE(verdict.compatible);
    ASSERT_TRUE(verdict.counterexample);
    // the reported matrix really is a violation
    Tuple image;
    for (std::size_t row = 0; row < 3; ++row) {
        Tuple args;
        for (const auto & col : *verdict.counterexample) {
            EXPECT_TRUE(r.contains(col));
            args.push_back(col[row]);
        }
        image.push_back(maj(args));
    }
    EXPECT_FALSE(r.contains(image));

    // binary order relation is preserved by majority
    EXPECT_TRUE(is_compatible_table(maj, pairs(2, {{0, 0}, {0, 1}, {1, 1}})).compatible);
}

TEST(Compatibility, WitnessTableForA03AgainstS0)
{
    const auto table = to_table(SymmetricOp::f_A(0, 3));
    ASSERT_EQ(table.arity(), 4u);
    EXPECT_TRUE(is_compatible_table(table, gen_S({0, 3}, 0)).compatible);
}

TEST(Compatibility, AgreesWithTripleLoopOracle)
{
    std::mt19937_64 rng(7);
    int incompatible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 2 + rng() % 2, k = 1 + rng() % 3, arity = 1 + rng() % 3;
        const auto t = random_table(rng, k, d);
        const auto r = random_relation(rng, arity, d, 0.3 + 0.1 * (rng() % 5));
        const bool expected = compatible_oracle(t, r);
        EXPECT_EQ(is_compatible_table(t, r).compatible, expected);
        incompatible += ! expected;
    }
    EXPECT_GT(incompatible, 20);
}

TEST(Compatibility, BudgetIsEnforced)
{
    std::mt19937_64 rng(8);
    const auto t = random_table(rng, 3, 2);
    Budget tiny;
    tiny.max_enumeration = 10;
    EXPECT_THROW(is_compatible_table(t, Relation::full(2, 3), tiny), BudgetExceeded);
}

TEST(Serialization, RelationRoundTripAndText)
{
    const auto dom = family_a::domain(1);
    const auto r = gen_S({1, 2}, 0);
    const auto j = relation_to_json(r, dom);
    EXPECT_EQ(j["arity"], 3);
    EXPECT_EQ(j["domain"], 3);
    EXPECT_EQ(j["tuples"][0], Json::array({"a", "a", "a"}));
    EXPECT_EQ(relation_from_json(j, dom), r);
    EXPECT_EQ(relation_to_text(r, dom), "a a a\na a 0\na 0 a\n1 1 1\n");
    EXPECT_THROW(relation_from_json(Json{{"arity", 2}, {"tuples", {{"a", "9"}}}}, dom), UsageError);
}

TEST(Serialization, StructureRoundTrip)
{
    const auto s = gen_structure_B({1});
    const auto back = structure_from_json(Json::parse(structure_to_json(s).dump()));
    ASSERT_EQ(back.relations().size(), s.relations().size());
    EXPECT_EQ(back.domain(), s.domain());
    for (std::size_t i = 0; i < s.relations().size(); ++i) {
        EXPECT_EQ(back.relations()[i].name, s.relations()[i].name);
        EXPECT_EQ(back.relations()[i].relation, s.relations()[i].relation);
    }
}

TEST(Bignum, DecimalAndHelpers)
{
    EXPECT_EQ(to_decimal(pow_tower(5, 6)), to_decimal(pow_big(5, 64)));
    EXPECT_EQ(from_decimal("340282366920938463463374607431768211456"), pow_big(2, 128));
    EXPECT_THROW(from_decimal("12a"), UsageError);
    EXPECT_THROW(from_decimal("-1"), UsageError);
    EXPECT_THROW(from_decimal(""), UsageError);
    EXPECT_EQ(binomial(10, 3), 120);
    EXPECT_TRUE(fits_u64(BigInt(~std::uint64_t{0})));
    EXPECT_FALSE(fits_u64(pow_big(2, 64)));
}

TEST(Bignum, UniformBelowIsDeterministicAndInRange)
{
    std::mt19937_64 a(9), b(9);
    const BigInt bound = pow_big(3, 100);
    for (int i = 0; i < 200; ++i) {
        const auto x = uniform_below(bound, a);
        EXPECT_EQ(x, uniform_below(bound, b));
        EXPECT_LT(x, bound);
        EXPECT_GE(x, 0);
    }
    std::map<std::uint64_t, int> hist;
    for (int i = 0; i < 6000; ++i)
        ++hist[uniform_below(std::uint64_t{6}, a)];
    for (std::uint64_t v = 0; v < 6; ++v)
        EXPECT_NEAR(hist[v], 1000, 150);
}

TEST(Bignum, BudgetFromEnvironment)
{
    ::setenv("POLYCLONE_BUDGET", "1234", 1);
    const auto b = Budget::from_environment();
    ::unsetenv("POLYCLONE_BUDGET");
    EXPECT_EQ(b.max_enumeration, 1234u);
    EXPECT_EQ(b.max_variables, 1234u);
    EXPECT_EQ(Budget::from_environment().max_enumeration, Budget{}.max_enumeration);
}

TEST(Compositions, CountAndOrder)
{
    std::vector<std::vector<std::uint64_t>> seen;
    for_each_composition(3, 3, [&](std::span<const std::uint64_t> c) {
        seen.emplace_back(c.begin(), c.end());
        return true;
    });
    EXPECT_EQ(BigInt(seen.size()), composition_count(3, 3));
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(std::set(seen.begin(), seen.end()).size(), seen.size());
    for (const auto & c : seen)
        EXPECT_EQ(c[0] + c[1] + c[2], 3u);

    int visits = 0;
    EXPECT_FALSE(for_each_composition(5, 4, [&](auto) { return ++visits < 7; }));
    EXPECT_EQ(visits, 7);
}

TEST(Compositions, SamplingIsUniform)
{
    // 3 into 3 parts: 10 compositions, each should appear about 1/10 of the time
    std::mt19937_64 rng(10);
    std::map<std::vector<BigInt>, int> hist;
    for (int i = 0; i < 20000; ++i) {
        const auto c = sample_composition(3, 3, rng);
        EXPECT_EQ(c[0] + c[1] + c[2], 3);
        ++hist[c];
    }
    EXPECT_EQ(hist.size(), 10u);
    for (const auto & [c, count] : hist)
        EXPECT_NEAR(count, 2000, 250);

    const auto huge = pow_tower(2, 8) + 1;
    const auto c = sample_composition(huge, 5, rng);
    BigInt sum = 0;
    for (const auto & x : c)
        sum += x;
    EXPECT_EQ(sum, huge);
}
