#include <polyclone/compositions.hpp>
#include <polyclone/structures.hpp>
#include <polyclone/witness.hpp>

#include <algorithm>

using std::size_t;
using std::span;
using std::vector;

namespace polyclone {

namespace {

constexpr std::uint64_t small_limit = std::uint64_t{1} << 62;

using u128 = unsigned __int128;

} // namespace

CountVector::CountVector(size_t domain_size) : _counts(domain_size, 0), _total(0)
{
    if (domain_size == 0 || domain_size > max_domain_size)
        throw UsageError("count vector domain size must be in 1.." + std::to_string(max_domain_size));
}

CountVector::CountVector(vector<BigInt> counts) : _counts(std::move(counts)), _total(0)
{
    if (_counts.empty() || _counts.size() > max_domain_size)
        throw UsageError("count vector domain size must be in 1.." + std::to_string(max_domain_size));
    for (const auto & c : _counts) {
        if (c < 0)
            throw UsageError("counts must be non-negative");
        _total += c;
    }
}

auto CountVector::from_tuple(span<const Element> tuple, size_t domain_size) -> CountVector
{
    CountVector x(domain_size);
    for (auto e : tuple)
        x.add(e, 1);
    return x;
}

auto CountVector::count(Element e) const -> const BigInt &
{
    if (index_of(e) >= _counts.size())
        throw UsageError("element outside the count vector's domain");
    return _counts[index_of(e)];
}

auto CountVector::support_mask() const -> std::uint64_t
{
    std::uint64_t mask = 0;
    for (size_t i = 0; i < _counts.size(); ++i)
        if (_counts[i] > 0)
            mask |= std::uint64_t{1} << i;
    return mask;
}

auto CountVector::set(Element e, BigInt value) -> void
{
    if (value < 0)
        throw UsageError("counts must be non-negative");
    if (index_of(e) >= _counts.size())
        throw UsageError("element outside the count vector's domain");
    _total += value - _counts[index_of(e)];
    _counts[index_of(e)] = std::move(value);
}

auto CountVector::add(Element e, const BigInt & delta) -> void
{
    set(e, count(e) + delta);
}

auto less_count(const CountVector & x, Element r) -> BigInt
{
    if (index_of(r) >= x.domain_size())
        throw UsageError("less_count: element outside domain");
    BigInt sum = 0;
    for (size_t i = 0; i < index_of(r); ++i)
        sum += x.counts()[i];
    return sum;
}

auto less_count(const CountVector & x, top_t) -> BigInt
{
    return x.total();
}

auto SymmetricOp::f_A(unsigned n, unsigned m) -> SymmetricOp
{
    SpecA{n, m}.validate();
    SymmetricOp op;
    op._family = Family::A;
    op._n = n;
    op._m = m;
    op._domain_size = n + 2;
    for (unsigned r = 0; r <= n; ++r)
        op._thresholds.push_back(pow_tower(m, r));
    op._arity = op._thresholds.back() + 1;
    for (const auto & t : op._thresholds)
        op._small_thresholds.push_back(t >= small_limit ? small_limit : static_cast<std::uint64_t>(t));
    if (op._arity < small_limit)
        op._small_arity = static_cast<std::uint64_t>(op._arity);
    return op;
}

auto SymmetricOp::f_B(unsigned n) -> SymmetricOp
{
    SpecB{n}.validate();
    auto op = f_A(n, 2);
    op._family = Family::B;
    op._domain_size = n + 3;
    return op;
}

auto SymmetricOp::from_function(size_t domain_size, BigInt arity, Function f) -> SymmetricOp
{
    if (domain_size == 0 || domain_size > max_domain_size)
        throw UsageError("symmetric operation domain size must be in 1.." + std::to_string(max_domain_size));
    if (arity < 1)
        throw UsageError("symmetric operation arity must be positive");
    SymmetricOp op;
    op._domain_size = domain_size;
    op._arity = std::move(arity);
    if (op._arity < small_limit)
        op._small_arity = static_cast<std::uint64_t>(op._arity);
    op._function = std::move(f);
    return op;
}

auto SymmetricOp::constant(size_t domain_size, BigInt arity, Element value) -> SymmetricOp
{
    if (index_of(value) >= domain_size)
        throw UsageError("constant value outside domain");
    return from_function(domain_size, std::move(arity), [value](const CountVector &) { return value; });
}

auto SymmetricOp::check_input(size_t domain_size, bool empty) const -> void
{
    if (domain_size != _domain_size)
        throw UsageError("count vector domain size " + std::to_string(domain_size) + " does not match the operation's " +
                std::to_string(_domain_size));
    if (empty)
        throw UsageError("symmetric operation applied to an empty count vector");
}

auto SymmetricOp::cascade(const CountVector & x, const BigInt & top_bound) const -> Element
{
    check_input(x.domain_size(), x.total() == 0);
    if (_family == Family::custom)
        return _function(x);

    // below[r] = number of arguments strictly less than the numeral r
    const size_t offset = _family == Family::A ? 1 : 2;
    vector<BigInt> below(_n + 1);
    BigInt running = 0;
    for (size_t id = 0, r = 0; r <= _n; ++id) {
        if (id == r + offset)
            below[r++] = running;
        running += x.counts()[id];
    }

    auto numeral = [&](unsigned r) { return element(r + offset); };
    if (top_bound > _thresholds[_n] * below[_n])
        return numeral(_n);
    for (unsigned r = _n; r-- > 0;)
        if (below[r + 1] > _thresholds[r] * below[r])
            return numeral(r);

    if (_family == Family::A)
        return family_a::a;
    return x.count(family_b::a2) > x.count(family_b::a1) ? family_b::a2 : family_b::a1;
}

auto SymmetricOp::operator()(const CountVector & x) const -> Element
{
    return cascade(x, _arity);
}

auto SymmetricOp::evaluate_at_total(const CountVector & x) const -> Element
{
    return cascade(x, x.total());
}

auto SymmetricOp::evaluate_max_form(const CountVector & x) const -> Element
{
    if (_family != Family::A)
        throw UsageError("the max form is defined for the A witness only");
    check_input(x.domain_size(), x.total() == 0);
    for (unsigned r = _n + 1; r-- > 0;) {
        const BigInt upper = r == _n ? less_count(x, top) : less_count(x, family_a::numeral(r + 1));
        if (upper > _thresholds[r] * less_count(x, family_a::numeral(r)))
            return family_a::numeral(r);
    }
    return family_a::a;
}

auto SymmetricOp::evaluate_small(span<const std::uint64_t> counts, bool at_total) const -> Element
{
    std::uint64_t total = 0;
    for (auto c : counts) {
        if (c >= small_limit || total >= small_limit - c)
            throw UsageError("evaluate_small: counts too large for the machine-word path");
        total += c;
    }
    check_input(counts.size(), total == 0);
    if (_family == Family::custom) {
        vector<BigInt> big(counts.begin(), counts.end());
        return _function(CountVector(std::move(big)));
    }
    if (! at_total && _small_arity == 0)
        throw UsageError("evaluate_small: declared arity too large for the machine-word path");

    const size_t offset = _family == Family::A ? 1 : 2;
    // prefix[id] = sum of counts with index < id
    std::uint64_t prefix[max_domain_size + 1];
    prefix[0] = 0;
    for (size_t id = 0; id < counts.size(); ++id)
        prefix[id + 1] = prefix[id] + counts[id];
    auto below = [&](unsigned r) -> u128 { return prefix[r + offset]; };

    const u128 top_bound = at_total ? total : _small_arity;
    if (top_bound > u128{_small_thresholds[_n]} * below(_n))
        return element(_n + offset);
    for (unsigned r = _n; r-- > 0;)
        if (below(r + 1) > u128{_small_thresholds[r]} * below(r))
            return element(r + offset);

    if (_family == Family::A)
        return family_a::a;
    return counts[1] > counts[0] ? family_b::a2 : family_b::a1;
}

auto f_A(unsigned n, unsigned m, const CountVector & x) -> Element
{
    return SymmetricOp::f_A(n, m)(x);
}

auto f_B(unsigned n, const CountVector & x) -> Element
{
    return SymmetricOp::f_B(n)(x);
}

auto is_nu_symmetric(const SymmetricOp & op) -> bool
{
    if (op.arity() < 3)
        return false;
    const auto d = op.domain_size();
    for (size_t s = 0; s < d; ++s) {
        CountVector constant(d);
        constant.set(element(s), op.arity());
        if (op(constant) != element(s))
            return false;
        for (size_t t = 0; t < d; ++t) {
            if (t == s)
                continue;
            CountVector x(d);
            x.set(element(s), op.arity() - 1);
            x.set(element(t), 1);
            if (op(x) != element(s))
                return false;
        }
    }
    return true;
}

auto is_conservative_exhaustive(const SymmetricOp & op, std::uint64_t max_total, const Budget & budget)
    -> ConservativityReport
{
    const auto d = op.domain_size();
    BigInt work = 0;
    for (std::uint64_t total = 1; total <= max_total; ++total)
        work += composition_count(total, d);
    if (work > budget.max_enumeration)
        throw BudgetExceeded("conservativity check over " + to_decimal(work) + " count vectors exceeds the budget");
    if (max_total >= small_limit)
        throw BudgetExceeded("max_total too large");

    ConservativityReport report;
    std::uint64_t examined = 0;
    for (std::uint64_t total = 1; total <= max_total && report.conservative; ++total) {
        const bool at_total = op.arity() != total;
        for_each_composition(total, d, [&](span<const std::uint64_t> counts) {
            ++examined;
            if (counts[index_of(op.evaluate_small(counts, at_total))] > 0)
                return true;
            report.conservative = false;
            report.counterexample = CountVector(vector<BigInt>(counts.begin(), counts.end()));
            return false;
        });
    }
    report.examined = examined;
    return report;
}

auto is_conservative_sampled(const SymmetricOp & op, std::uint64_t trials, std::uint64_t seed) -> ConservativityReport
{
    std::mt19937_64 rng(seed);
    ConservativityReport report;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        CountVector x(sample_composition(op.arity(), op.domain_size(), rng));
        report.examined += 1;
        if (x.count(op(x)) == 0) {
            report.conservative = false;
            report.counterexample = std::move(x);
            break;
        }
    }
    return report;
}

auto to_table(const SymmetricOp & op, const Budget & budget) -> OpTable
{
    const auto d = op.domain_size();
    if (! fits_u64(op.arity()))
        throw BudgetExceeded("arity too large for an explicit table");
    const auto k = static_cast<std::uint64_t>(op.arity());
    if (k > 64 || pow_big(BigInt(d), k) > budget.max_enumeration)
        throw BudgetExceeded("explicit table with " + std::to_string(d) + "^" + std::to_string(k) +
                " entries exceeds the budget");

    OpTable table(k, d);
    vector<std::uint64_t> counts(d);
    for (size_t idx = 0; idx < table.input_count(); ++idx) {
        std::fill(counts.begin(), counts.end(), 0);
        for (auto e : table.input(idx))
            ++counts[index_of(e)];
        table.set(idx, op.evaluate_small(counts));
    }
    return table;
}

} // namespace polyclone
