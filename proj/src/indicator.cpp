#include <polyclone/indicator.hpp>

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <map>

using std::size_t;
using std::uint32_t;
using std::vector;

namespace polyclone {

auto to_string(SolveStatus s) -> std::string
{
    switch (s) {
    case SolveStatus::sat: return "sat";
    case SolveStatus::unsat: return "unsat";
    case SolveStatus::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// Value the pinning forces on the input, if any.
auto pinned_value(const Tuple & x, const Pinning & pinning) -> std::optional<Element>
{
    const auto k = x.size();
    // find the majority value and how many entries differ from it
    for (size_t probe = 0; probe < std::min<size_t>(k, 2); ++probe) {
        const Element major = x[probe];
        size_t deviations = 0;
        Element deviant = major;
        for (auto e : x)
            if (e != major) {
                ++deviations;
                deviant = e;
            }
        if (deviations == 1) {
            if (pinning.kind == Pinning::Kind::nu)
                return major;
            if (major == pinning.high && deviant == pinning.low)
                return major;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

} // namespace

auto build_indicator(const Structure & structure, size_t k, const Pinning & pinning, const Budget & budget)
    -> IndicatorInstance
{
    const auto d = structure.domain_size();
    if (k < 3)
        throw UsageError("NU operations have arity at least 3, got " + std::to_string(k));
    std::uint64_t vars = 1;
    for (size_t i = 0; i < k; ++i) {
        vars *= d;
        if (vars > budget.max_variables)
            throw BudgetExceeded("indicator problem with " + std::to_string(d) + "^" + std::to_string(k) +
                    " variables exceeds the cap of " + std::to_string(budget.max_variables));
    }

    IndicatorInstance inst;
    inst.domain_size = d;
    inst.arity = k;
    inst.pinning = pinning;
    const OpTable shape(k, d);
    const uint32_t all = d == 32 ? ~uint32_t{0} : (uint32_t{1} << d) - 1;
    inst.domains.assign(vars, all);

    vector<std::uint64_t> unary_masks;
    for (const auto & [name, rel] : structure.relations())
        if (rel.arity() == 1)
            unary_masks.push_back(rel.unary_mask());

    for (size_t v = 0; v < vars; ++v) {
        const auto x = shape.input(v);
        std::uint64_t coords = 0;
        for (auto e : x)
            coords |= std::uint64_t{1} << index_of(e);
        for (auto mask : unary_masks)
            if ((coords & ~mask) == 0)
                inst.domains[v] &= static_cast<uint32_t>(mask);
        if (std::popcount(coords) == 1) {
            // idempotence is the NU identity with a = b
            if (pinning.kind == Pinning::Kind::nu)
                inst.domains[v] &= static_cast<uint32_t>(coords);
            if (std::popcount(inst.domains[v]) == 1)
                ++inst.pinned_constant;
        }
        else if (auto p = pinned_value(x, pinning)) {
            inst.domains[v] &= uint32_t{1} << index_of(*p);
            ++inst.pinned_by_identity;
        }
    }

    for (const auto & [name, rel] : structure.relations()) {
        if (rel.arity() < 2 || rel.empty())
            continue;
        std::uint64_t matrices = 1;
        for (size_t i = 0; i < k; ++i) {
            matrices *= rel.size();
            if (matrices > budget.max_enumeration)
                throw BudgetExceeded("relation " + name + " yields too many column matrices");
        }
        const auto rel_index = static_cast<uint32_t>(inst.relations.size());
        inst.relations.push_back(rel);
        inst.relation_names.push_back(name);

        const auto tuples = rel.tuples();
        vector<size_t> choice(k, 0);
        vector<IndicatorConstraint> found;
        for (;;) {
            IndicatorConstraint c{rel_index, vector<uint32_t>(rel.arity())};
            for (size_t row = 0; row < rel.arity(); ++row) {
                size_t idx = 0;
                for (size_t col = 0; col < k; ++col)
                    idx = idx * d + index_of(tuples[choice[col]][row]);
                c.scope[row] = static_cast<uint32_t>(idx);
            }
            found.push_back(std::move(c));

            size_t p = k;
            while (p > 0 && ++choice[p - 1] == tuples.size())
                choice[--p] = 0;
            if (p == 0)
                break;
        }
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        inst.constraints.insert(inst.constraints.end(), std::make_move_iterator(found.begin()),
                std::make_move_iterator(found.end()));
    }
    return inst;
}

namespace {

class Solver
{
public:
    Solver(const IndicatorInstance & inst, const SolveOptions & options) :
        _inst(inst), _options(options), _doms(inst.domains), _watchers(inst.variable_count()),
        _queued(inst.constraints.size(), false)
    {
        // table per (relation, repeated-variable pattern), filtered so that
        // repeated scope variables take equal values
        std::map<std::pair<uint32_t, vector<uint8_t>>, uint32_t> pool;
        for (size_t c = 0; c < inst.constraints.size(); ++c) {
            const auto & con = inst.constraints[c];
            vector<uint8_t> pattern(con.scope.size());
            for (size_t p = 0; p < con.scope.size(); ++p) {
                pattern[p] = static_cast<uint8_t>(p);
                for (size_t q = 0; q < p; ++q)
                    if (con.scope[q] == con.scope[p]) {
                        pattern[p] = static_cast<uint8_t>(q);
                        break;
                    }
            }
            auto [it, inserted] = pool.try_emplace({con.relation, pattern}, static_cast<uint32_t>(_tables.size()));
            if (inserted) {
                Table table;
                table.width = con.scope.size();
                for (const auto & t : inst.relations[con.relation].tuples()) {
                    bool consistent = true;
                    for (size_t p = 0; p < t.size(); ++p)
                        consistent = consistent && t[p] == t[pattern[p]];
                    if (consistent)
                        for (auto e : t)
                            table.cells.push_back(static_cast<uint8_t>(index_of(e)));
                }
                _tables.push_back(std::move(table));
            }
            _table_of.push_back(it->second);

            for (size_t p = 0; p < con.scope.size(); ++p)
                if (pattern[p] == p)
                    _watchers[con.scope[p]].push_back(static_cast<uint32_t>(c));
        }
    }

    auto run() -> SolveResult
    {
        SolveResult result;
        bool consistent = std::none_of(_doms.begin(), _doms.end(), [](uint32_t m) { return m == 0; });
        if (consistent) {
            for (uint32_t c = 0; c < _inst.constraints.size(); ++c)
                enqueue(c);
            consistent = propagate();
        }
        if (! consistent)
            result.status = SolveStatus::unsat;
        else
            result.status = search();
        result.nodes = _nodes;
        if (result.status == SolveStatus::sat) {
            vector<Element> values;
            for (auto m : _doms)
                values.push_back(element(static_cast<size_t>(std::countr_zero(m))));
            result.witness = OpTable(_inst.arity, _inst.domain_size, std::move(values));
        }
        return result;
    }

private:
    struct Table
    {
        size_t width = 0;
        vector<uint8_t> cells;
    };

    auto enqueue(uint32_t c) -> void
    {
        if (! _queued[c]) {
            _queued[c] = true;
            _queue.push_back(c);
        }
    }

    auto clear_queue() -> void
    {
        for (auto c : _queue)
            _queued[c] = false;
        _queue.clear();
    }

    auto narrow(uint32_t var, uint32_t mask, uint32_t from) -> bool
    {
        const uint32_t updated = _doms[var] & mask;
        if (updated == _doms[var])
            return true;
        _trail.emplace_back(var, _doms[var]);
        _doms[var] = updated;
        if (updated == 0)
            return false;
        for (auto c : _watchers[var])
            if (c != from)
                enqueue(c);
        return true;
    }

    auto revise(uint32_t c) -> bool
    {
        const auto & scope = _inst.constraints[c].scope;
        const auto & table = _tables[_table_of[c]];
        const size_t w = table.width;
        uint32_t support[max_domain_size] = {};
        uint32_t dom[max_domain_size];
        for (size_t p = 0; p < w; ++p)
            dom[p] = _doms[scope[p]];
        for (size_t row = 0; row < table.cells.size(); row += w) {
            bool valid = true;
            for (size_t p = 0; p < w && valid; ++p)
                valid = dom[p] >> table.cells[row + p] & 1u;
            if (valid)
                for (size_t p = 0; p < w; ++p)
                    support[p] |= uint32_t{1} << table.cells[row + p];
        }
        for (size_t p = 0; p < w; ++p)
            if (! narrow(scope[p], support[p], c))
                return false;
        return true;
    }

    auto propagate() -> bool
    {
        while (! _queue.empty()) {
            auto c = _queue.front();
            _queue.pop_front();
            _queued[c] = false;
            if (! revise(c)) {
                clear_queue();
                return false;
            }
        }
        return true;
    }

    auto undo_to(size_t mark) -> void
    {
        while (_trail.size() > mark) {
            auto [var, old] = _trail.back();
            _trail.pop_back();
            _doms[var] = old;
        }
    }

    auto search() -> SolveStatus
    {
        std::optional<uint32_t> branch;
        int best = 33;
        for (uint32_t v = 0; v < _doms.size(); ++v) {
            int size = std::popcount(_doms[v]);
            if (size > 1 && size < best) {
                best = size;
                branch = v;
            }
        }
        if (! branch)
            return SolveStatus::sat;

        const uint32_t var = *branch;
        const uint32_t values = _doms[var];
        for (uint32_t rest = values; rest != 0; rest &= rest - 1) {
            if (++_nodes > _options.node_limit)
                return SolveStatus::unknown;
            const uint32_t bit = rest & (~rest + 1);
            const size_t mark = _trail.size();
            bool ok = narrow(var, bit, std::numeric_limits<uint32_t>::max()) && propagate();
            if (ok) {
                auto status = search();
                if (status != SolveStatus::unsat)
                    return status;
            }
            undo_to(mark);
        }
        return SolveStatus::unsat;
    }

    const IndicatorInstance & _inst;
    const SolveOptions & _options;
    vector<uint32_t> _doms;
    vector<vector<uint32_t>> _watchers;
    vector<Table> _tables;
    vector<uint32_t> _table_of;
    vector<bool> _queued;
    std::deque<uint32_t> _queue;
    vector<std::pair<uint32_t, uint32_t>> _trail;
    std::uint64_t _nodes = 0;
};

} // namespace

auto solve(const IndicatorInstance & instance, const SolveOptions & options) -> SolveResult
{
    return Solver(instance, options).run();
}

auto verify_witness_table(const OpTable & t, const Structure & structure, const Pinning & pinning, const Budget & budget)
    -> bool
{
    const auto d = structure.domain_size();
    const auto k = t.arity();
    if (t.domain_size() != d || k < 3)
        return false;

    for (size_t major = 0; major < d; ++major)
        for (size_t minor = 0; minor < d; ++minor) {
            if (pinning.kind == Pinning::Kind::remark &&
                    (element(major) != pinning.high || element(minor) != pinning.low))
                continue;
            for (size_t pos = 0; pos < k; ++pos) {
                Tuple x(k, element(major));
                x[pos] = element(minor);
                if (t(x) != element(major))
                    return false;
            }
        }

    for (const auto & [name, rel] : structure.relations())
        if (! is_compatible_table(t, rel, budget).compatible)
            return false;
    return true;
}

auto decide_nu(const Structure & structure, size_t k, const std::optional<Pinning> & fixed_rows,
        const SolveOptions & options, const Budget & budget) -> DecideReport
{
    DecideReport report;
    report.arity = k;
    report.pinning = fixed_rows.value_or(Pinning::nu());
    const auto instance = build_indicator(structure, k, report.pinning, budget);
    report.variables = instance.variable_count();
    report.constraints = instance.constraints.size();
    report.result = solve(instance, options);
    if (report.result.witness)
        report.witness_verified = verify_witness_table(*report.result.witness, structure, report.pinning, budget);
    return report;
}

} // namespace polyclone
