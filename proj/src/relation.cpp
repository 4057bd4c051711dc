#include <polyclone/relation.hpp>

#include <algorithm>
#include <numeric>

using std::size_t;
using std::span;
using std::string;
using std::vector;

namespace polyclone {

namespace {

auto require_binary(const Relation & r, const char * op) -> void
{
    if (r.arity() != 2)
        throw UsageError(string(op) + " requires a binary relation, got arity " + std::to_string(r.arity()));
}

// successor masks: bit y of rows[x] is set iff (x,y) in r
auto adjacency(const Relation & r) -> vector<std::uint64_t>
{
    vector<std::uint64_t> rows(r.domain_size(), 0);
    for (const auto & t : r.tuples())
        rows[index_of(t[0])] |= std::uint64_t{1} << index_of(t[1]);
    return rows;
}

auto from_adjacency(size_t domain_size, const vector<std::uint64_t> & rows) -> Relation
{
    vector<Tuple> tuples;
    for (size_t x = 0; x < domain_size; ++x)
        for (size_t y = 0; y < domain_size; ++y)
            if (rows[x] >> y & 1u)
                tuples.push_back({element(x), element(y)});
    return Relation(2, domain_size, std::move(tuples));
}

} // namespace

Domain::Domain(vector<string> names) : _names(std::move(names))
{
    if (_names.empty() || _names.size() > max_domain_size)
        throw UsageError("domain size must be in 1.." + std::to_string(max_domain_size));
    auto sorted = _names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw UsageError("duplicate element name in domain");
}

auto Domain::name(Element e) const -> const string &
{
    if (index_of(e) >= _names.size())
        throw UsageError("element index " + std::to_string(index_of(e)) + " outside domain");
    return _names[index_of(e)];
}

auto Domain::find(std::string_view name) const -> std::optional<Element>
{
    for (size_t i = 0; i < _names.size(); ++i)
        if (_names[i] == name)
            return element(i);
    return std::nullopt;
}

auto Domain::parse(std::string_view name) const -> Element
{
    if (auto e = find(name))
        return *e;
    throw UsageError("unknown element '" + string(name) + "'");
}

Relation::Relation(size_t arity, size_t domain_size, vector<Tuple> tuples) :
    _arity(arity), _domain_size(domain_size), _tuples(std::move(tuples))
{
    if (arity == 0)
        throw UsageError("relation arity must be positive");
    if (domain_size == 0 || domain_size > max_domain_size)
        throw UsageError("relation domain size must be in 1.." + std::to_string(max_domain_size));
    for (const auto & t : _tuples) {
        if (t.size() != arity)
            throw UsageError("tuple length " + std::to_string(t.size()) + " does not match arity " + std::to_string(arity));
        for (auto e : t)
            if (index_of(e) >= domain_size)
                throw UsageError("tuple entry outside domain");
    }
    std::sort(_tuples.begin(), _tuples.end());
    _tuples.erase(std::unique(_tuples.begin(), _tuples.end()), _tuples.end());
}

auto Relation::identity(size_t domain_size) -> Relation
{
    vector<Tuple> tuples;
    for (size_t x = 0; x < domain_size; ++x)
        tuples.push_back({element(x), element(x)});
    return Relation(2, domain_size, std::move(tuples));
}

auto Relation::full(size_t domain_size, size_t arity) -> Relation
{
    vector<Tuple> tuples;
    Tuple t(arity, element(0));
    for (;;) {
        tuples.push_back(t);
        size_t p = arity;
        while (p > 0) {
            --p;
            if (index_of(t[p]) + 1 < domain_size) {
                t[p] = element(index_of(t[p]) + 1);
                break;
            }
            t[p] = element(0);
            if (p == 0)
                return Relation(arity, domain_size, std::move(tuples));
        }
    }
}

auto Relation::unary(size_t domain_size, std::uint64_t mask) -> Relation
{
    vector<Tuple> tuples;
    for (size_t x = 0; x < domain_size; ++x)
        if (mask >> x & 1u)
            tuples.push_back({element(x)});
    return Relation(1, domain_size, std::move(tuples));
}

auto Relation::contains(span<const Element> t) const -> bool
{
    if (t.size() != _arity)
        return false;
    auto it = std::lower_bound(_tuples.begin(), _tuples.end(), t, [](const Tuple & a, span<const Element> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return it != _tuples.end() && std::equal(it->begin(), it->end(), t.begin(), t.end());
}

auto Relation::unary_mask() const -> std::uint64_t
{
    if (_arity != 1)
        throw UsageError("unary_mask requires a unary relation");
    std::uint64_t mask = 0;
    for (const auto & t : _tuples)
        mask |= std::uint64_t{1} << index_of(t[0]);
    return mask;
}

auto compose(const Relation & p, const Relation & q) -> Relation
{
    require_binary(p, "compose");
    require_binary(q, "compose");
    if (p.domain_size() != q.domain_size())
        throw UsageError("compose: domain sizes differ");
    const auto d = p.domain_size();
    auto pa = adjacency(p), qa = adjacency(q);
    vector<std::uint64_t> out(d, 0);
    for (size_t x = 0; x < d; ++x)
        for (size_t y = 0; y < d; ++y)
            if (pa[x] >> y & 1u)
                out[x] |= qa[y];
    return from_adjacency(d, out);
}

auto converse(const Relation & r) -> Relation
{
    require_binary(r, "converse");
    vector<Tuple> tuples;
    tuples.reserve(r.size());
    for (const auto & t : r.tuples())
        tuples.push_back({t[1], t[0]});
    return Relation(2, r.domain_size(), std::move(tuples));
}

auto project(const Relation & r, span<const size_t> coords) -> Relation
{
    if (coords.empty())
        throw UsageError("project: empty coordinate list");
    for (auto c : coords)
        if (c >= r.arity())
            throw UsageError("project: coordinate " + std::to_string(c) + " out of range for arity " + std::to_string(r.arity()));
    vector<Tuple> tuples;
    tuples.reserve(r.size());
    for (const auto & t : r.tuples()) {
        Tuple image;
        image.reserve(coords.size());
        for (auto c : coords)
            image.push_back(t[c]);
        tuples.push_back(std::move(image));
    }
    return Relation(coords.size(), r.domain_size(), std::move(tuples));
}

auto is_equivalence(const Relation & r) -> bool
{
    require_binary(r, "is_equivalence");
    const auto d = r.domain_size();
    auto rows = adjacency(r);
    for (size_t x = 0; x < d; ++x) {
        if (! (rows[x] >> x & 1u))
            return false;
        for (size_t y = 0; y < d; ++y)
            if ((rows[x] >> y & 1u) && ! (rows[y] >> x & 1u))
                return false;
    }
    for (size_t x = 0; x < d; ++x)
        for (size_t y = 0; y < d; ++y)
            if ((rows[x] >> y & 1u) && (rows[y] & ~rows[x]) != 0)
                return false;
    return true;
}

auto blocks(const Relation & r) -> vector<Block>
{
    if (! is_equivalence(r))
        throw UsageError("blocks: relation is not an equivalence");
    auto rows = adjacency(r);
    vector<Block> result;
    std::uint64_t seen = 0;
    for (size_t x = 0; x < r.domain_size(); ++x) {
        if (seen >> x & 1u)
            continue;
        Block b;
        for (size_t y = 0; y < r.domain_size(); ++y)
            if (rows[x] >> y & 1u)
                b.push_back(element(y));
        seen |= rows[x];
        result.push_back(std::move(b));
    }
    return result;
}

auto Equivalence::from_relation(Relation r) -> Equivalence
{
    auto b = polyclone::blocks(r);
    return Equivalence(std::move(r), std::move(b));
}

auto Equivalence::from_blocks(size_t domain_size, const vector<Block> & bs) -> Equivalence
{
    vector<Tuple> tuples;
    std::uint64_t covered = 0;
    for (const auto & b : bs)
        for (auto x : b) {
            if (index_of(x) >= domain_size)
                throw UsageError("block element outside domain");
            if (covered >> index_of(x) & 1u)
                throw UsageError("blocks overlap");
            covered |= std::uint64_t{1} << index_of(x);
            for (auto y : b)
                tuples.push_back({x, y});
        }
    if (covered != (domain_size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << domain_size) - 1))
        throw UsageError("blocks do not cover the domain");
    return from_relation(Relation(2, domain_size, std::move(tuples)));
}

Structure::Structure(Domain domain, vector<NamedRelation> relations) :
    _domain(std::move(domain)), _relations(std::move(relations))
{
    for (const auto & r : _relations)
        if (r.relation.domain_size() != _domain.size())
            throw UsageError("relation " + r.name + " has a different domain size than its structure");
}

auto Structure::find(std::string_view name) const -> const Relation *
{
    for (const auto & r : _relations)
        if (r.name == name)
            return &r.relation;
    return nullptr;
}

auto Structure::at(std::string_view name) const -> const Relation &
{
    if (auto r = find(name))
        return *r;
    throw UsageError("structure has no relation named '" + string(name) + "'");
}

namespace {

auto table_size(size_t arity, size_t domain_size) -> size_t
{
    size_t n = 1;
    for (size_t i = 0; i < arity; ++i) {
        if (n > (size_t{1} << 40) / domain_size)
            throw BudgetExceeded("operation table with " + std::to_string(domain_size) + "^" + std::to_string(arity) + " entries is too large");
        n *= domain_size;
    }
    return n;
}

} // namespace

OpTable::OpTable(size_t arity, size_t domain_size) :
    _arity(arity), _domain_size(domain_size), _values(table_size(arity, domain_size), element(0))
{
    if (arity == 0 || domain_size == 0)
        throw UsageError("operation table needs positive arity and domain size");
}

OpTable::OpTable(size_t arity, size_t domain_size, vector<Element> values) : OpTable(arity, domain_size)
{
    if (values.size() != _values.size())
        throw UsageError("operation table has the wrong number of entries");
    for (auto v : values)
        if (index_of(v) >= domain_size)
            throw UsageError("operation table value outside domain");
    _values = std::move(values);
}

auto OpTable::index(span<const Element> args) const -> size_t
{
    if (args.size() != _arity)
        throw UsageError("operation applied to " + std::to_string(args.size()) + " arguments, arity is " + std::to_string(_arity));
    size_t idx = 0;
    for (auto e : args) {
        if (index_of(e) >= _domain_size)
            throw UsageError("argument outside domain");
        idx = idx * _domain_size + index_of(e);
    }
    return idx;
}

auto OpTable::input(size_t idx) const -> Tuple
{
    Tuple t(_arity);
    for (size_t p = _arity; p > 0; --p) {
        t[p - 1] = element(idx % _domain_size);
        idx /= _domain_size;
    }
    return t;
}

auto OpTable::set(size_t idx, Element value) -> void
{
    if (index_of(value) >= _domain_size)
        throw UsageError("operation table value outside domain");
    _values.at(idx) = value;
}

auto is_compatible_table(const OpTable & t, const Relation & r, const Budget & budget) -> TableCompatibility
{
    if (t.domain_size() != r.domain_size())
        throw UsageError("is_compatible_table: domain sizes differ");
    if (r.empty())
        return {};

    const auto k = t.arity();
    const auto n_tuples = r.size();
    std::uint64_t matrices = 1;
    for (size_t i = 0; i < k; ++i) {
        if (matrices > budget.max_enumeration / n_tuples)
            throw BudgetExceeded("is_compatible_table: " + std::to_string(n_tuples) + "^" + std::to_string(k) +
                    " column matrices exceed the budget; use the multiset verifier");
        matrices *= n_tuples;
    }

    const auto rows = r.arity();
    const auto tuples = r.tuples();
    vector<size_t> choice(k, 0);
    Tuple image(rows);
    for (;;) {
        for (size_t i = 0; i < rows; ++i) {
            size_t idx = 0;
            for (size_t c = 0; c < k; ++c)
                idx = idx * t.domain_size() + index_of(tuples[choice[c]][i]);
            image[i] = t.at(idx);
        }
        if (! r.contains(image)) {
            vector<Tuple> columns;
            for (auto c : choice)
                columns.push_back(tuples[c]);
            return {false, std::move(columns)};
        }
        size_t p = k;
        for (;;) {
            if (p == 0)
                return {};
            --p;
            if (++choice[p] < n_tuples)
                break;
            choice[p] = 0;
        }
    }
}

} // namespace polyclone
