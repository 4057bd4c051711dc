#pragma once

#include <polyclone/bignum.hpp>
#include <polyclone/relation.hpp>
#include <polyclone/witness.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polyclone {

// Index of the least zero bit of k.
auto least_zero_bit(std::uint64_t k) -> unsigned;

// Count of element i in the k-th schedule vector of A(n,m), where i is a or
// a numeral below n. Requires 0 <= k < 2^n.
auto inum(unsigned n, unsigned m, std::uint64_t k, Element i) -> BigInt;

auto build_vector(unsigned n, unsigned m, std::uint64_t k) -> CountVector;

struct ScheduleA
{
    unsigned n = 0;
    unsigned m = 2;
    std::vector<CountVector> vectors; // v_0 .. v_{2^n - 1} over the domain of A(n,m)
};

// w_k: the m = 2 A-schedule with the a-count split evenly between a1 and a2.
struct ScheduleB
{
    unsigned n = 0;
    std::vector<CountVector> vectors; // over the domain of B(n)
};

// Both builders verify the schedule invariants and throw CertificateError
// if one fails.
auto build_schedule_A(unsigned n, unsigned m) -> ScheduleA;
auto build_schedule_B(unsigned n) -> ScheduleB;

// Items a) to d) of the pivot lemma for k -> k+1, i the least zero bit of k.
struct PivotLemmaReport
{
    unsigned pivot = 0;
    bool zero_below = false;       // a)
    bool pivot_count = false;      // b)
    bool next_pivot_vanishes = false; // c)
    bool below_pivot_after = false;   // d)

    auto all() const -> bool { return zero_below && pivot_count && next_pivot_vanishes && below_pivot_after; }
};

// Requires 0 <= k <= 2^n - 2.
auto check_lemma_i1(unsigned n, unsigned m, std::uint64_t k) -> PivotLemmaReport;

struct ColumnUse
{
    Tuple column;
    BigInt count;

    auto operator==(const ColumnUse &) const -> bool = default;
};

// One application of the column lemma: a matrix whose columns lie in
// `relation`. Row 0 is the conclusion row, the remaining rows are premises
// on which t is known to take the value forbidden[1]. Since `forbidden` is
// not in the relation, t cannot map the conclusion row to forbidden[0].
struct LemmaApplication
{
    std::string relation;
    Tuple forbidden;
    // A: l_a, l_i, l_{i+1}, ..., l_n.  B: l_a1, l_a2, l_i, ..., l_n.
    std::vector<BigInt> parameters;
    std::vector<ColumnUse> columns;

    auto operator==(const LemmaApplication &) const -> bool = default;
};

// Arithmetic identities of the pivot lemma, stored as claimed values.
struct PivotLemmaFacts
{
    std::vector<BigInt> counts_below_pivot;     // I_k^(j), j < i: all zero
    BigInt pivot_count;                         // I_k^(i) = m^(k+1) (m^(2^i) - 1)
    BigInt below_after_pivot;                   // x_<i+1(v_k) = m^(k+1+2^i)
    BigInt next_pivot_count;                    // I_{k+1}^(i) = 0
    std::vector<BigInt> next_counts_above_pivot; // I_{k+1}^(j) = I_k^(j), j > i
    BigInt next_below_pivot;                    // x_<i(v_{k+1}) = m^(k+1+2^i)

    auto operator==(const PivotLemmaFacts &) const -> bool = default;
};

enum class StepKind
{
    base,
    induction
};

struct StepCertificate
{
    StepKind kind = StepKind::base;
    // index of the derived vector; 0 for the base case
    std::uint64_t step = 0;
    // base: n; induction: least zero bit of step - 1
    unsigned pivot = 0;
    std::vector<LemmaApplication> applications;
    std::optional<PivotLemmaFacts> lemma;
    // induction: index i+1 of the congruence a0..i|i+1|...|n of the case split
    std::optional<unsigned> congruence;
    // induction: unary relation {a,i,...,n-1} (B: {a1,a2,i,...,n-1})
    std::optional<std::uint64_t> support_relation;

    auto operator==(const StepCertificate &) const -> bool = default;
};

struct TraceCertificate
{
    Family family = Family::A;
    unsigned n = 0;
    unsigned m = 2;
    // m^(2^n), the common length of the schedule vectors
    BigInt arity;
    std::vector<CountVector> schedule;
    // steps[k] derives schedule[k]
    std::vector<StepCertificate> steps;
    std::uint64_t terminal_support = 0;

    auto operator==(const TraceCertificate &) const -> bool = default;
};

// Largest n for which certificates are built (2^n steps).
inline constexpr unsigned max_trace_n = 12;

// The step deriving v_k: the base case from the NU identities for k = 0,
// the induction step from v_{k-1} otherwise. 0 <= k <= 2^n - 1.
auto certify_step(unsigned n, unsigned m, std::uint64_t k) -> StepCertificate;
auto certify_step_B(unsigned n, std::uint64_t k) -> StepCertificate;

// Throws CertificateError naming the first column outside `relation`, or
// the forbidden image if it lies in `relation`.
auto require_members(const LemmaApplication & app, const Relation & relation) -> void;

auto certify_lowerbound_A(unsigned n, unsigned m) -> TraceCertificate;
auto certify_lowerbound_B(unsigned n) -> TraceCertificate;

struct CheckReport
{
    bool ok = true;
    std::vector<std::string> faults;
};

// Re-verifies every recorded fact against the structure's own relations
// with independent arithmetic.
auto check_certificate(const TraceCertificate & cert, const Structure & structure) -> CheckReport;

} // namespace polyclone
