#include <polyclone/compat.hpp>
#include <polyclone/compositions.hpp>

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

using std::size_t;
using std::span;
using std::vector;

namespace polyclone {

auto ColumnMultiset::total() const -> BigInt
{
    BigInt t = 0;
    for (const auto & c : counts)
        t += c;
    return t;
}

auto row_counts(const Relation & r, const ColumnMultiset & cm) -> vector<CountVector>
{
    if (cm.counts.size() != r.size())
        throw UsageError("column multiset does not match the relation's tuple count");
    vector<CountVector> rows(r.arity(), CountVector(r.domain_size()));
    const auto tuples = r.tuples();
    for (size_t p = 0; p < tuples.size(); ++p) {
        if (cm.counts[p] < 0)
            throw UsageError("column multiset counts must be non-negative");
        if (cm.counts[p] == 0)
            continue;
        for (size_t i = 0; i < r.arity(); ++i)
            rows[i].add(tuples[p][i], cm.counts[p]);
    }
    return rows;
}

auto apply_rows(const SymmetricOp & op, const Relation & r, const ColumnMultiset & cm) -> Tuple
{
    Tuple image;
    for (const auto & row : row_counts(r, cm))
        image.push_back(op(row));
    return image;
}

auto is_violation(const SymmetricOp & op, const Relation & r, const ColumnMultiset & cm) -> bool
{
    if (cm.counts.size() != r.size() || cm.total() != op.arity())
        return false;
    return ! r.contains(apply_rows(op, r, cm));
}

auto multiset_count(const SymmetricOp & op, const Relation & r) -> BigInt
{
    return composition_count(op.arity(), r.size());
}

namespace {

// Dense membership table over encoded tuples when it is small enough.
class Membership
{
public:
    explicit Membership(const Relation & r) : _relation(r)
    {
        std::uint64_t cells = 1;
        for (size_t i = 0; i < r.arity(); ++i) {
            cells *= r.domain_size();
            if (cells > (std::uint64_t{1} << 24))
                return;
        }
        _dense.assign(cells, false);
        for (const auto & t : r.tuples())
            _dense[encode(t)] = true;
    }

    auto contains(span<const Element> t) const -> bool
    {
        if (_dense.empty())
            return _relation.contains(t);
        return _dense[encode(t)];
    }

private:
    auto encode(span<const Element> t) const -> size_t
    {
        size_t code = 0;
        for (auto e : t)
            code = code * _relation.domain_size() + index_of(e);
        return code;
    }

    const Relation & _relation;
    vector<bool> _dense;
};

struct BranchResult
{
    std::uint64_t examined = 0;
    std::optional<vector<std::uint64_t>> violation;
};

// Scans every multiset whose first tuple has multiplicity `first`.
class BranchScanner
{
public:
    BranchScanner(const SymmetricOp & op, const Relation & r, const Membership & member, std::uint64_t arity) :
        _op(op), _tuples(r.tuples()), _member(member), _rows(r.arity()), _domain(r.domain_size()), _arity(arity),
        _row_counts(r.arity() * r.domain_size(), 0), _counts(r.size(), 0), _image(r.arity())
    {
    }

    auto scan(std::uint64_t first) -> BranchResult
    {
        _result = {};
        std::fill(_row_counts.begin(), _row_counts.end(), 0);
        std::fill(_counts.begin(), _counts.end(), 0);
        if (_tuples.size() == 1) {
            if (first == _arity) {
                add(0, first);
                leaf();
            }
            return _result;
        }
        add(0, first);
        visit(1, _arity - first);
        return _result;
    }

private:
    auto add(size_t p, std::uint64_t c) -> void
    {
        _counts[p] += c;
        for (size_t i = 0; i < _rows; ++i)
            _row_counts[i * _domain + index_of(_tuples[p][i])] += c;
    }

    auto remove(size_t p, std::uint64_t c) -> void
    {
        _counts[p] -= c;
        for (size_t i = 0; i < _rows; ++i)
            _row_counts[i * _domain + index_of(_tuples[p][i])] -= c;
    }

    // false once a violation has been recorded
    auto leaf() -> bool
    {
        ++_result.examined;
        for (size_t i = 0; i < _rows; ++i)
            _image[i] = _op.evaluate_small(span<const std::uint64_t>(_row_counts.data() + i * _domain, _domain));
        if (_member.contains(_image))
            return true;
        _result.violation = _counts;
        return false;
    }

    auto visit(size_t p, std::uint64_t remaining) -> bool
    {
        if (p + 1 == _tuples.size()) {
            add(p, remaining);
            bool go_on = leaf();
            remove(p, remaining);
            return go_on;
        }
        for (std::uint64_t c = 0; c <= remaining; ++c) {
            if (! visit(p + 1, remaining - c)) {
                remove(p, c);
                return false;
            }
            if (c < remaining)
                add(p, 1);
        }
        remove(p, remaining);
        return true;
    }

    const SymmetricOp & _op;
    span<const Tuple> _tuples;
    const Membership & _member;
    size_t _rows, _domain;
    std::uint64_t _arity;
    vector<std::uint64_t> _row_counts;
    vector<std::uint64_t> _counts;
    Tuple _image;
    BranchResult _result;
};

auto to_multiset(const vector<std::uint64_t> & counts) -> ColumnMultiset
{
    return ColumnMultiset{vector<BigInt>(counts.begin(), counts.end())};
}

} // namespace

auto check_compat_symmetric(const SymmetricOp & op, const Relation & r, const CompatOptions & options) -> Verdict
{
    if (op.domain_size() != r.domain_size())
        throw UsageError("operation and relation have different domains");
    Verdict verdict;
    verdict.mode = VerdictMode::exact;
    if (r.empty())
        return verdict;

    const BigInt count = multiset_count(op, r);
    if (count > options.budget.max_enumeration)
        throw BudgetExceeded(to_decimal(count) + " column multisets exceed the enumeration budget of " +
                std::to_string(options.budget.max_enumeration) + "; use sampled mode");

    if (! fits_u64(op.arity()) || op.arity() >= (std::uint64_t{1} << 62)) {
        // only reachable with a single-tuple relation: one multiset
        ColumnMultiset cm{{op.arity()}};
        verdict.examined = 1;
        if (is_violation(op, r, cm)) {
            verdict.ok = false;
            verdict.violation = cm;
        }
        return verdict;
    }

    const auto arity = static_cast<std::uint64_t>(op.arity());
    const Membership member(r);
    const unsigned jobs = std::max(1u, options.jobs);
    const std::uint64_t branches = r.size() == 1 ? 1 : arity + 1;
    auto branch_value = [&](std::uint64_t b) { return r.size() == 1 ? arity : b; };

    vector<BranchResult> results(branches);
    std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};

    auto work = [&](unsigned worker) {
        BranchScanner scanner(op, r, member, arity);
        for (std::uint64_t b = worker; b < branches; b += jobs) {
            if (b > first_bad.load())
                break;
            results[b] = scanner.scan(branch_value(b));
            if (results[b].violation) {
                auto seen = first_bad.load();
                while (b < seen && ! first_bad.compare_exchange_weak(seen, b)) {
                }
            }
        }
    };

    if (jobs == 1)
        work(0);
    else {
        vector<std::jthread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(work, w);
    }

    BigInt examined = 0;
    for (std::uint64_t b = 0; b < branches; ++b) {
        examined += results[b].examined;
        if (results[b].violation) {
            verdict.ok = false;
            verdict.violation = to_multiset(*results[b].violation);
            break;
        }
    }
    verdict.examined = examined;
    return verdict;
}

auto check_compat_sampled(const SymmetricOp & op, const Relation & r, std::uint64_t trials, std::uint64_t seed) -> Verdict
{
    if (op.domain_size() != r.domain_size())
        throw UsageError("operation and relation have different domains");
    Verdict verdict;
    verdict.mode = VerdictMode::sampled;
    verdict.seed = seed;
    if (r.empty())
        return verdict;

    std::mt19937_64 rng(seed);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        ColumnMultiset cm{sample_composition(op.arity(), r.size(), rng)};
        verdict.examined += 1;
        if (! r.contains(apply_rows(op, r, cm))) {
            verdict.ok = false;
            verdict.violation = std::move(cm);
            break;
        }
    }
    return verdict;
}

auto check_compat_binary(const SymmetricOp & op, const Relation & r, const CompatOptions & options,
        const BinaryFallback & fallback) -> Verdict
{
    if (r.arity() != 2)
        throw UsageError("check_compat_binary requires a binary relation, got arity " + std::to_string(r.arity()));
    if (multiset_count(op, r) > options.budget.max_enumeration && fallback.trials > 0)
        return check_compat_sampled(op, r, fallback.trials, fallback.seed);
    return check_compat_symmetric(op, r, options);
}

} // namespace polyclone
