#include <polyclone/structures.hpp>
#include <polyclone/trace.hpp>

#include <bit>
#include <map>

using std::size_t;
using std::vector;

namespace polyclone {

namespace {

auto require(bool holds, const std::string & fact) -> void
{
    if (! holds)
        throw CertificateError(fact);
}

auto check_k(unsigned n, std::uint64_t k, std::uint64_t limit_below_2n) -> void
{
    if (n >= 63)
        throw UsageError("n must be below 63");
    const std::uint64_t steps = std::uint64_t{1} << n;
    if (k + limit_below_2n >= steps)
        throw UsageError("k = " + std::to_string(k) + " out of range for n = " + std::to_string(n));
}

auto power(unsigned m, std::uint64_t e) -> BigInt
{
    return pow_big(BigInt(m), e);
}

auto tuple_text(const Tuple & t, const Domain & domain) -> std::string
{
    std::string s = "(";
    for (size_t p = 0; p < t.size(); ++p)
        s += (p ? "," : "") + domain.name(t[p]);
    return s + ")";
}

// Row tallies of a column multiset.
auto rows_of(const LemmaApplication & app, size_t height, size_t d) -> vector<CountVector>
{
    vector<CountVector> rows(height, CountVector(d));
    for (const auto & c : app.columns)
        for (size_t r = 0; r < height; ++r)
            rows[r].add(c.column[r], c.count);
    return rows;
}

auto parameter_sum(const LemmaApplication & app, size_t weight_of_first) -> BigInt
{
    BigInt sum = 0;
    for (size_t p = 0; p < app.parameters.size(); ++p)
        sum += p == 0 ? app.parameters[p] * weight_of_first : app.parameters[p];
    return sum;
}

// I_k^(j) for j < i, I_k^(i), x_<i+1(v_k), I_{k+1}^(i), I_{k+1}^(j) for j > i, x_<i(v_{k+1}).
auto pivot_facts(const CountVector & vk, const CountVector & vnext, unsigned n, unsigned i, size_t offset)
    -> PivotLemmaFacts
{
    PivotLemmaFacts f;
    for (unsigned j = 0; j < i; ++j)
        f.counts_below_pivot.push_back(vk.count(element(j + offset)));
    f.pivot_count = vk.count(element(i + offset));
    f.below_after_pivot = less_count(vk, element(i + 1 + offset));
    f.next_pivot_count = vnext.count(element(i + offset));
    for (unsigned j = i + 1; j < n; ++j)
        f.next_counts_above_pivot.push_back(vnext.count(element(j + offset)));
    f.next_below_pivot = less_count(vnext, element(i + offset));
    return f;
}

auto validate_spec_A(unsigned n, unsigned m) -> SpecA
{
    SpecA spec{n, m};
    spec.validate();
    if (! spec.lower_bound_meaningful())
        throw UsageError("the lower-bound argument excludes n = 0, m = 2");
    return spec;
}

} // namespace

auto least_zero_bit(std::uint64_t k) -> unsigned
{
    if (k == ~std::uint64_t{0})
        throw UsageError("least_zero_bit: no zero bit");
    return static_cast<unsigned>(std::countr_one(k));
}

auto inum(unsigned n, unsigned m, std::uint64_t k, Element i) -> BigInt
{
    SpecA{n, m}.validate();
    check_k(n, k, 0);
    if (i == family_a::a)
        return power(m, k + 1);
    const auto idx = index_of(i) - 1;
    if (idx >= n)
        throw UsageError("inum: element index must be a or a numeral below n");
    if ((k >> idx) & 1u)
        return 0;
    // exponent b_{n-1} ... b_{idx+1} followed by idx+1 zeros, plus 2^idx
    std::string digits;
    for (unsigned j = n; j-- > idx + 1;)
        digits += ((k >> j) & 1u) ? '1' : '0';
    digits.append(idx + 1, '0');
    const std::uint64_t exponent = std::stoull(digits, nullptr, 2) + (std::uint64_t{1} << idx);
    return power(m, exponent) * (pow_tower(m, idx) - 1);
}

auto build_vector(unsigned n, unsigned m, std::uint64_t k) -> CountVector
{
    CountVector v(SpecA{n, m}.domain_size());
    v.set(family_a::a, inum(n, m, k, family_a::a));
    for (unsigned r = 0; r < n; ++r)
        v.set(family_a::numeral(r), inum(n, m, k, family_a::numeral(r)));
    return v;
}

auto build_schedule_A(unsigned n, unsigned m) -> ScheduleA
{
    SpecA{n, m}.validate();
    check_k(n, 0, 0);
    ScheduleA s{n, m, {}};
    const BigInt length = pow_tower(m, n);
    const std::uint64_t steps = std::uint64_t{1} << n;
    for (std::uint64_t k = 0; k < steps; ++k) {
        s.vectors.push_back(build_vector(n, m, k));
        require(s.vectors.back().total() == length, "v_" + std::to_string(k) + " does not have total m^(2^n)");
        if (k > 0)
            require(s.vectors[k].count(family_a::a) == s.vectors[k - 1].count(family_a::a) * m,
                    "the a-count of v_" + std::to_string(k) + " is not m times that of v_" + std::to_string(k - 1));
    }
    require(s.vectors.back().count(family_a::a) == length, "the last vector is not constant a");
    return s;
}

auto build_schedule_B(unsigned n) -> ScheduleB
{
    SpecB{n}.validate();
    const auto a_side = build_schedule_A(n, 2);
    ScheduleB s{n, {}};
    const BigInt length = pow_tower(2, n);
    for (size_t k = 0; k < a_side.vectors.size(); ++k) {
        const auto & v = a_side.vectors[k];
        CountVector w(SpecB{n}.domain_size());
        const BigInt half = v.count(family_a::a) / 2;
        w.set(family_b::a1, half);
        w.set(family_b::a2, half);
        for (unsigned r = 0; r <= n; ++r)
            w.set(family_b::numeral(r), v.count(family_a::numeral(r)));
        require(half == power(2, k), "a1 and a2 counts of w_" + std::to_string(k) + " are not 2^k");
        require(w.total() == length, "w_" + std::to_string(k) + " does not have total 2^(2^n)");
        s.vectors.push_back(std::move(w));
    }
    require(s.vectors.back().support_mask() == 0b11, "the last vector is not supported on {a1,a2}");
    return s;
}

auto check_lemma_i1(unsigned n, unsigned m, std::uint64_t k) -> PivotLemmaReport
{
    SpecA{n, m}.validate();
    check_k(n, k, 1);
    PivotLemmaReport report;
    const unsigned i = least_zero_bit(k);
    report.pivot = i;
    const auto vk = build_vector(n, m, k);
    const auto vnext = build_vector(n, m, k + 1);
    const auto f = pivot_facts(vk, vnext, n, i, 1);
    const BigInt block = power(m, k + 1 + (std::uint64_t{1} << i));

    report.zero_below = std::all_of(f.counts_below_pivot.begin(), f.counts_below_pivot.end(),
            [](const BigInt & c) { return c == 0; });
    report.pivot_count = f.pivot_count == power(m, k + 1) * (pow_tower(m, i) - 1) && f.below_after_pivot == block &&
                         vk.count(family_a::a) + f.pivot_count == block;
    report.next_pivot_vanishes = f.next_pivot_count == 0;
    for (unsigned j = i + 1; j < n; ++j)
        report.next_pivot_vanishes = report.next_pivot_vanishes &&
                                     vnext.count(family_a::numeral(j)) == vk.count(family_a::numeral(j));
    report.below_pivot_after = f.next_below_pivot == block;
    return report;
}

auto require_members(const LemmaApplication & app, const Relation & relation) -> void
{
    const auto domain = Domain([&] {
        vector<std::string> names;
        for (size_t e = 0; e < relation.domain_size(); ++e)
            names.push_back(std::to_string(e));
        return names;
    }());
    for (const auto & c : app.columns)
        require(c.column.size() == relation.arity() && relation.contains(c.column),
                "column " + tuple_text(c.column, domain) + " (element indices) is not a member of " + app.relation);
    require(app.forbidden.size() == relation.arity() && ! relation.contains(app.forbidden),
            "forbidden image " + tuple_text(app.forbidden, domain) + " is a member of " + app.relation);
}

auto certify_step(unsigned n, unsigned m, std::uint64_t k) -> StepCertificate
{
    const auto spec = validate_spec_A(n, m);
    check_k(n, k, 0);
    using namespace family_a;
    const BigInt length = pow_tower(m, n);
    const auto d = spec.domain_size();
    const std::string at = "step " + std::to_string(k) + ": ";

    StepCertificate step;
    step.step = k;
    const auto target = build_vector(n, m, k);
    LemmaApplication app;
    CountVector premise(d);
    unsigned i = n;
    BigInt l_a = 1;

    if (k == 0) {
        step.kind = StepKind::base;
        app.parameters = {l_a, length - m};
        premise.set(a, 1);
        premise.set(numeral(n), length - 1);
    }
    else {
        step.kind = StepKind::induction;
        i = least_zero_bit(k - 1);
        premise = build_vector(n, m, k - 1);
        l_a = power(m, k);
        app.parameters = {l_a, power(m, k + (std::uint64_t{1} << i)) - power(m, k + 1)};
        for (unsigned u = i + 1; u < n; ++u)
            app.parameters.push_back(premise.count(numeral(u)));
        app.parameters.push_back(0);

        const auto report = check_lemma_i1(n, m, k - 1);
        require(report.zero_below, at + "pivot lemma item (a) fails");
        require(report.pivot_count, at + "pivot lemma item (b) fails");
        require(report.next_pivot_vanishes, at + "pivot lemma item (c) fails");
        require(report.below_pivot_after, at + "pivot lemma item (d) fails");
        step.lemma = pivot_facts(premise, target, n, i, 1);

        step.congruence = i + 1;
        require(verify_eq1(spec, i + 1), at + "the chain identity for the congruence index " + std::to_string(i + 1) +
                " fails");
        std::uint64_t mask = std::uint64_t{1} << index_of(a);
        for (unsigned u = i; u < n; ++u)
            mask |= std::uint64_t{1} << index_of(numeral(u));
        step.support_relation = mask;
        require((premise.support_mask() & ~mask) == 0, at + "the premise vector leaves the case-split unary relation");
    }
    step.pivot = i;
    app.relation = s_name(i);
    app.forbidden = Tuple(m + 1, numeral(i));
    app.forbidden[0] = a;

    for (unsigned b = 0; b < m; ++b) {
        Tuple col(m + 1, numeral(i));
        col[0] = a;
        col[b + 1] = a;
        app.columns.push_back({std::move(col), l_a});
    }
    for (unsigned x = 0; x < i; ++x)
        if (target.count(numeral(x)) > 0) {
            Tuple col(m + 1, numeral(i));
            col[0] = numeral(x);
            app.columns.push_back({std::move(col), target.count(numeral(x))});
        }
    for (unsigned u = i + 1; u <= n; ++u) {
        const auto & l_u = app.parameters[u - i + 1];
        if (l_u > 0)
            app.columns.push_back({Tuple(m + 1, numeral(u)), l_u});
    }

    require_members(app, gen_S(spec, i));
    require(parameter_sum(app, m) == length, at + "l_a * m + sum of l_j is not m^(2^n)");
    const auto rows = rows_of(app, m + 1, d);
    require(rows[0] == target, at + "the conclusion row is not v_" + std::to_string(k));
    for (unsigned r = 1; r <= m; ++r)
        require(rows[r] == premise, at + "premise row " + std::to_string(r) + " is not a permutation of the premise");
    step.applications.push_back(std::move(app));
    return step;
}

auto certify_step_B(unsigned n, std::uint64_t k) -> StepCertificate
{
    const SpecB spec{n};
    spec.validate();
    check_k(n, k, 0);
    using namespace family_b;
    const BigInt length = pow_tower(2, n);
    const auto d = spec.domain_size();
    const std::string at = "step " + std::to_string(k) + ": ";

    auto w = [&](std::uint64_t idx) {
        const auto v = build_vector(n, 2, idx);
        CountVector out(d);
        out.set(a1, v.count(family_a::a) / 2);
        out.set(a2, v.count(family_a::a) / 2);
        for (unsigned r = 0; r <= n; ++r)
            out.set(numeral(r), v.count(family_a::numeral(r)));
        return out;
    };

    StepCertificate step;
    step.step = k;
    const auto target = w(k);
    unsigned i = n;
    std::optional<CountVector> previous;
    if (k == 0)
        step.kind = StepKind::base;
    else {
        step.kind = StepKind::induction;
        i = least_zero_bit(k - 1);
        previous = w(k - 1);
        const auto report = check_lemma_i1(n, 2, k - 1);
        require(report.all(), at + "pivot lemma fails");
        step.lemma = pivot_facts(*previous, target, n, i, 2);
        step.congruence = i + 1;
        require(verify_eq1_B(spec, i + 1), at + "the chain identity for the congruence index " +
                std::to_string(i + 1) + " fails");
        std::uint64_t mask = 0b11;
        for (unsigned u = i; u < n; ++u)
            mask |= std::uint64_t{1} << index_of(numeral(u));
        step.support_relation = mask;
        require((previous->support_mask() & ~mask) == 0, at + "the premise vector leaves the case-split unary relation");
    }
    step.pivot = i;

    for (unsigned j = 1; j <= 2; ++j) {
        LemmaApplication app;
        app.relation = r_name(i, j);
        app.forbidden = {a(j), numeral(i)};
        CountVector premise(d);
        BigInt l_a1, l_a2;
        if (k == 0) {
            l_a1 = j == 1 ? 1 : 0;
            l_a2 = j == 2 ? 1 : 0;
            app.parameters = {l_a1, l_a2, length - 1};
            premise.set(a(j), 1);
            premise.set(numeral(n), length - 1);
        }
        else {
            premise = *previous;
            l_a1 = premise.count(a1);
            l_a2 = premise.count(a2);
            app.parameters = {l_a1, l_a2};
            for (unsigned u = i; u < n; ++u)
                app.parameters.push_back(premise.count(numeral(u)));
            app.parameters.push_back(0);
        }
        require(l_a1 + l_a2 <= app.parameters[2], at + "side condition l_a1 + l_a2 <= l_i fails for " + app.relation);

        auto push = [&](Tuple col, const BigInt & count) {
            if (count > 0)
                app.columns.push_back({std::move(col), count});
        };
        push({a(j), a1}, l_a1);
        push({a(j), a2}, l_a2);
        push({a(3 - j), numeral(i)}, l_a1 + l_a2);
        for (unsigned x = 0; x < i; ++x)
            push({numeral(x), numeral(i)}, target.count(numeral(x)));
        for (unsigned u = i + 1; u <= n; ++u)
            push({numeral(u), numeral(u)}, app.parameters[u - i + 2]);

        require_members(app, gen_Rij(spec, i, j));
        require(parameter_sum(app, 1) == length, at + "sum of the l parameters is not 2^(2^n)");
        const auto rows = rows_of(app, 2, d);
        require(rows[0] == target, at + "the conclusion row of " + app.relation + " is not w_" + std::to_string(k));
        require(rows[1] == premise, at + "the premise row of " + app.relation + " does not match");
        step.applications.push_back(std::move(app));
    }
    return step;
}

auto certify_lowerbound_A(unsigned n, unsigned m) -> TraceCertificate
{
    validate_spec_A(n, m);
    if (n > max_trace_n)
        throw BudgetExceeded("certificates are built for n <= " + std::to_string(max_trace_n));
    TraceCertificate cert;
    cert.family = Family::A;
    cert.n = n;
    cert.m = m;
    cert.arity = pow_tower(m, n);
    cert.schedule = build_schedule_A(n, m).vectors;
    for (std::uint64_t k = 0; k < cert.schedule.size(); ++k) {
        try {
            cert.steps.push_back(certify_step(n, m, k));
        }
        catch (const CertificateError & e) {
            throw CertificateError("step " + std::to_string(k) + " failed: " + e.what());
        }
    }
    cert.terminal_support = cert.schedule.back().support_mask();
    require(cert.terminal_support == std::uint64_t{1} << index_of(family_a::a), "terminal vector is not constant a");
    return cert;
}

auto certify_lowerbound_B(unsigned n) -> TraceCertificate
{
    SpecB{n}.validate();
    if (n > max_trace_n)
        throw BudgetExceeded("certificates are built for n <= " + std::to_string(max_trace_n));
    TraceCertificate cert;
    cert.family = Family::B;
    cert.n = n;
    cert.m = 2;
    cert.arity = pow_tower(2, n);
    cert.schedule = build_schedule_B(n).vectors;
    for (std::uint64_t k = 0; k < cert.schedule.size(); ++k) {
        try {
            cert.steps.push_back(certify_step_B(n, k));
        }
        catch (const CertificateError & e) {
            throw CertificateError("step " + std::to_string(k) + " failed: " + e.what());
        }
    }
    cert.terminal_support = cert.schedule.back().support_mask();
    require(cert.terminal_support == 0b11, "terminal vector is not supported on {a1,a2}");
    return cert;
}

} // namespace polyclone
