#include <polyclone/compositions.hpp>
#include <polyclone/structures.hpp>
#include <polyclone/witness.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace polyclone;

namespace {

auto counts(std::initializer_list<std::uint64_t> cs) -> CountVector
{
    std::vector<BigInt> v(cs.begin(), cs.end());
    return CountVector(std::move(v));
}

// Piecewise definition written out independently of the library, on small
// integers. offset is the index of numeral 0.
auto reference_cascade(const std::vector<std::uint64_t> & x, unsigned n, unsigned m, std::size_t offset,
        std::uint64_t top_bound) -> std::size_t
{
    auto below = [&](unsigned r) {
        std::uint64_t s = 0;
        for (std::size_t id = 0; id < r + offset; ++id)
            s += x[id];
        return s;
    };
    auto threshold = [&](unsigned r) {
        std::uint64_t t = m;
        for (unsigned p = 0; p < r; ++p)
            t *= t;
        return t;
    };
    if (top_bound > threshold(n) * below(n))
        return n + offset;
    for (int r = static_cast<int>(n) - 1; r >= 0; --r)
        if (below(r + 1) > threshold(r) * below(r))
            return r + offset;
    if (offset == 1)
        return 0;
    return x[1] > x[0] ? 1 : 0;
}

} // namespace

TEST(CountVector, Basics)
{
    auto x = counts({2, 1, 2});
    EXPECT_EQ(x.total(), 5);
    EXPECT_EQ(x.support_mask(), 0b111u);
    x.set(element(1), 0);
    EXPECT_EQ(x.total(), 4);
    EXPECT_EQ(x.support_mask(), 0b101u);
    x.add(element(0), 3);
    EXPECT_EQ(x.count(element(0)), 5);
    EXPECT_EQ(x.total(), 7);
    EXPECT_THROW(x.set(element(0), -1), UsageError);
    const Tuple t{element(2), element(0), element(2)};
    EXPECT_EQ(CountVector::from_tuple(t, 3), counts({1, 0, 2}));
}

TEST(LessCount, Examples)
{
    const auto x = counts({2, 1, 2}); // a:2, 0:1, 1:2
    EXPECT_EQ(less_count(x, family_a::numeral(1)), 3);
    EXPECT_EQ(less_count(x, family_a::a), 0);
    EXPECT_EQ(less_count(x, top), x.total());
}

TEST(WitnessA, Examples)
{
    EXPECT_EQ(f_A(1, 2, counts({2, 1, 2})), family_a::a);

    // constant inputs and one deviation
    for (unsigned n = 0; n <= 2; ++n)
        for (unsigned m = 2; m <= 3; ++m) {
            const auto op = SymmetricOp::f_A(n, m);
            EXPECT_EQ(op.arity(), pow_tower(m, n) + 1);
            for (std::size_t s = 0; s < n + 2; ++s) {
                CountVector c(n + 2);
                c.set(element(s), op.arity());
                EXPECT_EQ(op(c), element(s));
                for (std::size_t t = 0; t < n + 2; ++t)
                    if (t != s) {
                        CountVector x(n + 2);
                        x.set(element(s), op.arity() - 1);
                        x.set(element(t), 1);
                        EXPECT_EQ(op(x), element(s)) << n << m << s << t;
                    }
            }
        }
    EXPECT_THROW(f_A(1, 2, CountVector(3)), UsageError);
    EXPECT_THROW(f_A(1, 2, counts({1, 1})), UsageError);
}

TEST(WitnessB, Examples)
{
    const auto op0 = SymmetricOp::f_B(0);
    EXPECT_EQ(op0.arity(), 3);
    EXPECT_EQ(op0(counts({3, 0, 0})), family_b::a1);
    EXPECT_EQ(op0(counts({0, 3, 0})), family_b::a2);
    // nothing fires (3 > 2*2 is false) and a1, a2 tie, so a1
    EXPECT_EQ(op0(counts({1, 1, 1})), family_b::a1);

    const auto op1 = SymmetricOp::f_B(1);
    EXPECT_EQ(op1.arity(), 5);
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t t = 0; t < 4; ++t)
            if (s != t) {
                CountVector x(4);
                x.set(element(s), 4);
                x.set(element(t), 1);
                EXPECT_EQ(op1(x), element(s));
            }
}

TEST(WitnessB, TieRuleFavoursA1)
{
    // whenever no threshold fires, equal a-counts give a1
    const auto op = SymmetricOp::f_B(1);
    int ties = 0;
    for_each_composition(5, 4, [&](std::span<const std::uint64_t> c) {
        const std::vector<std::uint64_t> x(c.begin(), c.end());
        const auto r = op(CountVector(std::vector<BigInt>(c.begin(), c.end())));
        if (index_of(r) < 2 && x[0] == x[1]) {
            EXPECT_EQ(r, family_b::a1);
            ++ties;
        }
        return true;
    });
    EXPECT_GT(ties, 0);
}

TEST(Witness, NuSymmetry)
{
    EXPECT_TRUE(is_nu_symmetric(SymmetricOp::f_A(1, 2)));
    EXPECT_TRUE(is_nu_symmetric(SymmetricOp::f_A(2, 3)));
    EXPECT_TRUE(is_nu_symmetric(SymmetricOp::f_B(0)));
    EXPECT_TRUE(is_nu_symmetric(SymmetricOp::f_B(2)));
    EXPECT_TRUE(is_nu_symmetric(SymmetricOp::f_A(6, 3))); // bignum arity
    EXPECT_FALSE(is_nu_symmetric(SymmetricOp::constant(3, 5, element(0))));
    // arity 2 is never NU here
    const auto binary = SymmetricOp::from_function(2, 2, [](const CountVector & x) {
        return x.count(element(1)) > 0 ? element(1) : element(0);
    });
    EXPECT_FALSE(is_nu_symmetric(binary));
}

TEST(Witness, ConservativeExhaustive)
{
    std::uint64_t at_five = 0;
    for_each_composition(5, 3, [&](auto) { return ++at_five, true; });
    EXPECT_EQ(at_five, 21u);

    const auto r = is_conservative_exhaustive(SymmetricOp::f_A(1, 2), 5);
    EXPECT_TRUE(r.conservative);
    EXPECT_EQ(r.examined, 3 + 6 + 10 + 15 + 21);

    for (unsigned n = 0; n <= 3; ++n) {
        EXPECT_TRUE(is_conservative_exhaustive(SymmetricOp::f_A(n, 2), 12).conservative) << n;
        EXPECT_TRUE(is_conservative_exhaustive(SymmetricOp::f_A(n, 3), 10).conservative) << n;
        EXPECT_TRUE(is_conservative_exhaustive(SymmetricOp::f_B(n), 10).conservative) << n;
    }
}

TEST(Witness, ConservativeSampled)
{
    const auto r = is_conservative_sampled(SymmetricOp::f_B(1), 10'000, 42);
    EXPECT_TRUE(r.conservative);
    EXPECT_EQ(r.examined, 10'000);
    EXPECT_TRUE(is_conservative_sampled(SymmetricOp::f_A(5, 3), 2'000, 7).conservative);
    EXPECT_TRUE(is_conservative_sampled(SymmetricOp::f_B(6), 2'000, 7).conservative);
}

TEST(Witness, NonConservativeOpIsCaught)
{
    // always answers the top element
    const auto bad = SymmetricOp::constant(3, 5, element(2));
    const auto r = is_conservative_exhaustive(bad, 3);
    EXPECT_FALSE(r.conservative);
    ASSERT_TRUE(r.counterexample);
    EXPECT_EQ(r.counterexample->count(element(2)), 0);
    EXPECT_FALSE(is_conservative_sampled(bad, 100, 1).conservative);
}

TEST(Witness, SupportOfOneElement)
{
    const auto op = SymmetricOp::f_A(2, 2);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::uint64_t total = 1; total <= 20; ++total) {
            CountVector x(4);
            x.set(element(r), total);
            EXPECT_EQ(op.evaluate_at_total(x), element(r));
        }
}

TEST(Witness, CascadeAgreesWithMaxForm)
{
    for (unsigned n = 0; n <= 3; ++n)
        for (unsigned m = 2; m <= 4; ++m) {
            const auto op = SymmetricOp::f_A(n, m);
            for (std::uint64_t total = 1; total <= 9; ++total)
                for_each_composition(total, n + 2, [&](std::span<const std::uint64_t> c) {
                    const CountVector x(std::vector<BigInt>(c.begin(), c.end()));
                    EXPECT_EQ(op.evaluate_at_total(x), op.evaluate_max_form(x));
                    return true;
                });
        }
    // at the declared arity with large random counts
    std::mt19937_64 rng(3);
    const auto op = SymmetricOp::f_A(4, 3);
    for (int i = 0; i < 2000; ++i) {
        const CountVector x(sample_composition(op.arity(), 6, rng));
        EXPECT_EQ(op(x), op.evaluate_max_form(x));
    }
    EXPECT_THROW(SymmetricOp::f_B(1).evaluate_max_form(counts({1, 1, 1, 1})), UsageError);
}

TEST(Witness, AgreesWithReferenceDefinition)
{
    for (unsigned n = 0; n <= 2; ++n)
        for (unsigned m = 2; m <= 3; ++m) {
            const auto op = SymmetricOp::f_A(n, m);
            const auto l = static_cast<std::uint64_t>(op.arity());
            for (std::uint64_t total = 1; total <= 10; ++total)
                for_each_composition(total, n + 2, [&](std::span<const std::uint64_t> c) {
                    const std::vector<std::uint64_t> x(c.begin(), c.end());
                    const CountVector cv(std::vector<BigInt>(c.begin(), c.end()));
                    EXPECT_EQ(index_of(op(cv)), reference_cascade(x, n, m, 1, l));
                    EXPECT_EQ(index_of(op.evaluate_at_total(cv)), reference_cascade(x, n, m, 1, total));
                    return true;
                });
        }
    for (unsigned n = 0; n <= 2; ++n) {
        const auto op = SymmetricOp::f_B(n);
        const auto l = static_cast<std::uint64_t>(op.arity());
        for (std::uint64_t total = 1; total <= 9; ++total)
            for_each_composition(total, n + 3, [&](std::span<const std::uint64_t> c) {
                const std::vector<std::uint64_t> x(c.begin(), c.end());
                const CountVector cv(std::vector<BigInt>(c.begin(), c.end()));
                EXPECT_EQ(index_of(op(cv)), reference_cascade(x, n, 2, 2, l));
                return true;
            });
    }
}

TEST(Witness, WordPathMatchesBignumPath)
{
    std::mt19937_64 rng(11);
    for (auto op : {SymmetricOp::f_A(3, 3), SymmetricOp::f_A(4, 2), SymmetricOp::f_B(3), SymmetricOp::f_B(4)}) {
        for (int i = 0; i < 3000; ++i) {
            const auto parts = sample_composition(op.arity(), op.domain_size(), rng);
            std::vector<std::uint64_t> small;
            for (const auto & p : parts)
                small.push_back(static_cast<std::uint64_t>(p));
            const CountVector x(parts);
            EXPECT_EQ(op.evaluate_small(small), op(x));
            EXPECT_EQ(op.evaluate_small(small, true), op.evaluate_at_total(x));
        }
    }
    // arity beyond 64 bits: word path refuses
    const auto huge = SymmetricOp::f_A(7, 3);
    std::vector<std::uint64_t> c(9, 1);
    EXPECT_THROW(huge.evaluate_small(c), UsageError);
}

TEST(Witness, TableAgreesWithDirectEvaluation)
{
    for (auto op : {SymmetricOp::f_A(0, 2), SymmetricOp::f_A(0, 3), SymmetricOp::f_A(1, 2), SymmetricOp::f_B(0)}) {
        const auto t = to_table(op);
        ASSERT_EQ(BigInt(t.arity()), op.arity());
        for (std::size_t i = 0; i < t.input_count(); ++i) {
            const auto args = t.input(i);
            const auto x = CountVector::from_tuple(args, op.domain_size());
            EXPECT_EQ(t.at(i), op(x));
            // permuting the arguments cannot change the value
            auto rev = args;
            std::reverse(rev.begin(), rev.end());
            EXPECT_EQ(t(rev), t.at(i));
        }
    }
    Budget tiny;
    tiny.max_enumeration = 100;
    EXPECT_THROW(to_table(SymmetricOp::f_A(1, 2), tiny), BudgetExceeded);
}
