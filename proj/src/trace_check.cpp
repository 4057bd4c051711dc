// Certificate checker. Deliberately self-contained: it recomputes the
// schedule and every identity with its own arithmetic, and takes relation
// memberships from the structure it is given.

#include <polyclone/trace.hpp>

#include <bit>
#include <map>
#include <set>

using std::size_t;
using std::string;
using std::vector;

namespace polyclone {

namespace {

auto raise(unsigned base, std::uint64_t e) -> BigInt
{
    BigInt result = 1, b = base;
    while (e > 0) {
        if (e & 1u)
            result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

class Checker
{
public:
    Checker(const TraceCertificate & cert, const Structure & s) : _cert(cert), _s(s) {}

    auto run() -> CheckReport
    {
        if (parameters_ok() && structure_ok()) {
            schedule();
            expect(_cert.steps.size() == steps(), "certificate has " + std::to_string(_cert.steps.size()) +
                    " steps, expected 2^n");
            for (size_t k = 0; k < _cert.steps.size() && k < _expected.size(); ++k)
                step(k);
        }
        _report.ok = _report.faults.empty();
        return std::move(_report);
    }

private:
    auto fault(string text) -> void { _report.faults.push_back(std::move(text)); }

    auto expect(bool holds, const string & text) -> bool
    {
        if (! holds)
            fault(text);
        return holds;
    }

    // element ids: a (or a1,a2) first, then the numerals
    auto offset() const -> size_t { return _b ? 2 : 1; }
    auto num(unsigned r) const -> Element { return element(r + offset()); }
    auto d() const -> size_t { return _cert.n + 1 + offset(); }
    auto steps() const -> std::uint64_t { return std::uint64_t{1} << _cert.n; }

    auto parameters_ok() -> bool
    {
        if (_cert.family != Family::A && _cert.family != Family::B)
            return expect(false, "certificate family must be A or B");
        _b = _cert.family == Family::B;
        if (_cert.n > max_trace_n)
            return expect(false, "n exceeds the certificate limit");
        if (_b && _cert.m != 2)
            return expect(false, "B certificates carry m = 2");
        if (_cert.m < 2 || _cert.m > 1'000'000)
            return expect(false, "m out of range");
        if (! _b && _cert.n == 0 && _cert.m == 2)
            return expect(false, "A(0,2) has no lower-bound claim");
        _length = raise(_cert.m, std::uint64_t{1} << _cert.n);
        return expect(_cert.arity == _length, "arity is not m^(2^n)");
    }

    auto structure_ok() -> bool
    {
        if (! expect(_s.domain_size() == d(), "structure domain size " + std::to_string(_s.domain_size()) +
                             " does not match the certificate (" + std::to_string(d()) + ")"))
            return false;
        bool ok = true;
        for (unsigned i = 0; i <= _cert.n; ++i)
            for (unsigned j = 1; j <= (_b ? 2u : 1u); ++j) {
                const auto name = relation_name(i, j);
                const auto * r = _s.find(name);
                ok = expect(r != nullptr, "structure lacks " + name) && ok;
                if (r)
                    ok = expect(r->arity() == (_b ? 2u : _cert.m + 1), name + " has the wrong arity") && ok;
            }
        return ok;
    }

    auto relation_name(unsigned i, unsigned j) const -> string
    {
        return _b ? "R_" + std::to_string(i) + "^" + std::to_string(j) : "S_" + std::to_string(i);
    }

    // Counts of the k-th vector from the binary digits of k.
    auto expected_vector(std::uint64_t k) const -> vector<BigInt>
    {
        const auto m = _cert.m;
        vector<BigInt> c(d(), 0);
        const BigInt a_count = raise(m, k + 1);
        if (_b) {
            c[0] = a_count / 2;
            c[1] = a_count / 2;
        }
        else
            c[0] = a_count;
        for (unsigned i = 0; i < _cert.n; ++i) {
            if ((k >> i) & 1u)
                continue;
            const std::uint64_t high = (k >> (i + 1)) << (i + 1);
            c[i + offset()] = raise(m, high + (std::uint64_t{1} << i)) * (raise(m, std::uint64_t{1} << i) - 1);
        }
        return c;
    }

    auto below(const CountVector & v, size_t id) const -> BigInt
    {
        BigInt sum = 0;
        for (size_t e = 0; e < id && e < v.domain_size(); ++e)
            sum += v.counts()[e];
        return sum;
    }

    auto schedule() -> void
    {
        const auto & sch = _cert.schedule;
        for (std::uint64_t k = 0; k < steps(); ++k)
            _expected.push_back(expected_vector(k));
        if (! expect(sch.size() == steps(), "schedule has " + std::to_string(sch.size()) + " vectors, expected 2^n"))
            return;
        for (std::uint64_t k = 0; k < steps(); ++k) {
            const auto & v = sch[k];
            const string at = "schedule vector " + std::to_string(k) + ": ";
            if (! expect(v.domain_size() == d(), at + "wrong domain size"))
                continue;
            for (size_t e = 0; e < d(); ++e)
                expect(v.counts()[e] == _expected[k][e], at + "count of element " + _s.domain().name(element(e)) +
                        " is " + to_decimal(v.counts()[e]) + ", expected " + to_decimal(_expected[k][e]));
            expect(v.total() == _length, at + "total is not m^(2^n)");
            if (k > 0)
                expect(below(v, offset()) == below(sch[k - 1], offset()) * _cert.m, at + "a-count did not grow by m");
            if (_b)
                expect(v.counts()[0] == v.counts()[1] && v.counts()[0] == raise(2, k), at + "a1, a2 counts are not 2^k");
        }
        const std::uint64_t terminal = _b ? 0b11 : 0b1;
        expect(sch.back().domain_size() == d() && sch.back().support_mask() == terminal,
                "the last vector is not supported on the a-elements");
        expect(_cert.terminal_support == terminal, "recorded terminal support is wrong");
    }

    auto step(size_t k) -> void
    {
        const auto & st = _cert.steps[k];
        const string at = "step " + std::to_string(k) + ": ";
        expect(st.step == k, at + "records index " + std::to_string(st.step));
        const bool base = k == 0;
        if (! expect(st.kind == (base ? StepKind::base : StepKind::induction), at + "wrong step kind"))
            return;
        const unsigned pivot = base ? _cert.n : static_cast<unsigned>(std::countr_one(k - 1));
        if (! expect(st.pivot == pivot, at + "pivot is " + std::to_string(st.pivot) + ", expected " +
                        std::to_string(pivot)))
            return;

        const auto target = CountVector(_expected[k]);
        if (base) {
            expect(! st.lemma, at + "the base case carries no pivot lemma");
            expect(! st.congruence && ! st.support_relation, at + "the base case has no case split");
        }
        else {
            const auto premise = CountVector(_expected[k - 1]);
            lemma(st, k, premise, target, at);
            case_split(st, premise, target, at);
        }

        const size_t applications = _b ? 2 : 1;
        if (! expect(st.applications.size() == applications, at + "wrong number of lemma applications"))
            return;
        for (size_t j = 1; j <= applications; ++j)
            application(st.applications[j - 1], static_cast<unsigned>(j), k, pivot, target,
                    at + "application " + std::to_string(j) + ": ");
    }

    auto lemma(const StepCertificate & st, size_t k, const CountVector & vk, const CountVector & vnext, const string & at)
        -> void
    {
        if (! expect(st.lemma.has_value(), at + "missing pivot lemma facts"))
            return;
        const auto & f = *st.lemma;
        const auto i = st.pivot;
        const auto m = _cert.m;
        const std::uint64_t prev = k - 1;
        const BigInt block = raise(m, prev + 1 + (std::uint64_t{1} << i));

        // a) counts below the pivot vanish in v_k
        bool a = f.counts_below_pivot.size() == i;
        for (unsigned j = 0; a && j < i; ++j)
            a = f.counts_below_pivot[j] == 0 && vk.count(num(j)) == 0;
        expect(a, at + "pivot lemma item (a) fails");

        // b)
        bool b = f.pivot_count == raise(m, prev + 1) * (raise(m, std::uint64_t{1} << i) - 1) &&
                 f.pivot_count == vk.count(num(i)) && f.below_after_pivot == block &&
                 f.below_after_pivot == below(vk, i + 1 + offset());
        expect(b, at + "pivot lemma item (b) fails");

        // c)
        bool c = f.next_pivot_count == 0 && vnext.count(num(i)) == 0 &&
                 f.next_counts_above_pivot.size() + i + 1 == _cert.n;
        for (unsigned j = i + 1; c && j < _cert.n; ++j)
            c = f.next_counts_above_pivot[j - i - 1] == vnext.count(num(j)) && vnext.count(num(j)) == vk.count(num(j));
        expect(c, at + "pivot lemma item (c) fails");

        // d)
        expect(f.next_below_pivot == block && f.next_below_pivot == below(vnext, i + offset()),
                at + "pivot lemma item (d) fails");
    }

    auto case_split(const StepCertificate & st, const CountVector & vk, const CountVector & vnext, const string & at)
        -> void
    {
        const auto i = st.pivot;
        if (expect(st.congruence == i + 1, at + "case split must use the congruence with index pivot + 1")) {
            expect(congruence_holds(i + 1), at + "the relational chain does not define the congruence " +
                    std::to_string(i + 1));
            // v_k and v_{k+1} are related positionwise by the congruence
            bool related = below(vk, i + 1 + offset()) == below(vnext, i + 1 + offset());
            for (unsigned u = i + 1; u <= _cert.n; ++u)
                related = related && vk.count(num(u)) == vnext.count(num(u));
            expect(related, at + "consecutive vectors are not congruent");
        }

        std::uint64_t mask = _b ? 0b11 : 0b1;
        for (unsigned u = i; u < _cert.n; ++u)
            mask |= std::uint64_t{1} << index_of(num(u));
        if (! expect(st.support_relation == mask, at + "case split uses the wrong unary relation"))
            return;
        bool present = false;
        for (const auto & [name, rel] : _s.relations())
            present = present || (rel.arity() == 1 && rel.unary_mask() == mask);
        expect(present, at + "the case-split unary relation is not in the structure");
        expect((vk.support_mask() & ~mask) == 0, at + "the premise vector leaves the case-split unary relation");
    }

    // The chain conv(R_0) o ... o conv(R_{c-1}) o R_{c-1} o ... o R_0 with R_j
    // the first two coordinates of S_j (B: R_j^1) equals the partition with
    // blocks {a.., 0..c-1}, {c}, ..., {n}.
    auto congruence_holds(unsigned c) -> bool
    {
        if (auto it = _chains.find(c); it != _chains.end())
            return it->second;
        bool holds = false;
        if (c >= 1 && c <= _cert.n) {
            const size_t coords[2] = {0, 1};
            vector<Relation> r;
            for (unsigned j = 0; j < c; ++j)
                r.push_back(project(_s.at(relation_name(j, 1)), coords));
            Relation chain = converse(r[0]);
            for (unsigned j = 1; j < c; ++j)
                chain = compose(chain, converse(r[j]));
            for (unsigned j = c; j-- > 0;)
                chain = compose(chain, r[j]);
            vector<Tuple> pairs;
            auto cls = [&](size_t e) { return e < c + offset() ? size_t{0} : e; };
            for (size_t x = 0; x < d(); ++x)
                for (size_t y = 0; y < d(); ++y)
                    if (cls(x) == cls(y))
                        pairs.push_back({element(x), element(y)});
            holds = chain == Relation(2, d(), pairs);
        }
        _chains[c] = holds;
        return holds;
    }

    auto application(const LemmaApplication & app, unsigned j, size_t k, unsigned pivot, const CountVector & target,
            const string & at) -> void
    {
        const auto name = relation_name(pivot, j);
        if (! expect(app.relation == name, at + "targets " + app.relation + ", expected " + name))
            return;
        const auto & rel = _s.at(name);
        const size_t height = rel.arity();
        const Element top = _b ? element(j - 1) : element(0);

        Tuple forbidden(height, num(pivot));
        forbidden[0] = top;
        expect(app.forbidden == forbidden, at + "wrong forbidden image");
        expect(! rel.contains(forbidden), at + "forbidden image lies in " + name);

        // expected parameters
        vector<BigInt> params;
        const bool base = k == 0;
        if (_b) {
            if (base)
                params = {j == 1 ? 1 : 0, j == 2 ? 1 : 0, _length - 1};
            else {
                params = {raise(2, k - 1), raise(2, k - 1)};
                for (unsigned u = pivot; u < _cert.n; ++u)
                    params.push_back(_expected[k - 1][index_of(num(u))]);
                params.push_back(0);
            }
        }
        else {
            if (base)
                params = {1, _length - _cert.m};
            else {
                params = {raise(_cert.m, k), raise(_cert.m, k + (std::uint64_t{1} << pivot)) - raise(_cert.m, k + 1)};
                for (unsigned u = pivot + 1; u < _cert.n; ++u)
                    params.push_back(_expected[k - 1][index_of(num(u))]);
                params.push_back(0);
            }
        }
        if (! expect(app.parameters == params, at + "parameters l differ from the expected values"))
            return;
        BigInt sum = 0;
        for (size_t p = 0; p < params.size(); ++p)
            sum += (! _b && p == 0) ? params[p] * _cert.m : params[p];
        expect(sum == _length, at + "parameters do not add up to m^(2^n)");
        if (_b)
            expect(params[0] + params[1] <= params[2], at + "side condition l_a1 + l_a2 <= l_i fails");

        // every column is a member, appears once, has positive count and the lemma's shape
        std::set<Tuple> seen;
        vector<CountVector> rows(height, CountVector(d()));
        BigInt minus_total = 0;
        std::map<Tuple, BigInt> fixed;
        for (const auto & c : app.columns) {
            if (! expect(c.column.size() == height, at + "column of wrong length"))
                return;
            bool in_domain = true;
            for (auto e : c.column)
                in_domain = in_domain && index_of(e) < d();
            if (! expect(in_domain, at + "column entry outside the domain"))
                return;
            expect(rel.contains(c.column), at + "column is not a member of " + name);
            expect(seen.insert(c.column).second, at + "column listed twice");
            expect(c.count > 0, at + "column with non-positive count");
            for (size_t r = 0; r < height; ++r)
                rows[r].add(c.column[r], c.count < 0 ? BigInt(0) : c.count);

            const auto e0 = index_of(c.column[0]);
            bool tail_pivot = true;
            for (size_t r = 1; r < height; ++r)
                tail_pivot = tail_pivot && c.column[r] == num(pivot);
            if (e0 >= offset() && e0 < index_of(num(pivot)) && tail_pivot)
                minus_total += c.count;
            else
                fixed[c.column] += c.count;
        }

        // the columns of fixed shape and their multiplicities
        std::map<Tuple, BigInt> shape;
        auto want = [&](Tuple col, const BigInt & count) {
            if (count > 0)
                shape[std::move(col)] = count;
        };
        BigInt l_minus;
        size_t first_const;
        if (_b) {
            const Element aj = element(j - 1), other = element(2 - j);
            want({aj, element(0)}, params[0]);
            want({aj, element(1)}, params[1]);
            want({other, num(pivot)}, params[0] + params[1]);
            l_minus = params[2] - params[0] - params[1];
            first_const = 3;
        }
        else {
            for (size_t b = 0; b < _cert.m; ++b) {
                Tuple col(height, num(pivot));
                col[0] = element(0);
                col[b + 1] = element(0);
                want(std::move(col), params[0]);
            }
            l_minus = params[1];
            first_const = 2;
        }
        for (unsigned u = pivot + 1; u <= _cert.n; ++u)
            want(Tuple(height, num(u)), params[first_const + u - pivot - 1]);
        expect(fixed == shape, at + "columns do not have the lemma's shape");
        expect(minus_total == l_minus, at + "columns below the pivot do not add up to l_i");

        // rows: conclusion, then premises
        expect(rows[0] == target, at + "conclusion row is not vector " + std::to_string(k));
        CountVector premise(d());
        if (base) {
            premise.set(_b ? element(j - 1) : element(0), 1);
            premise.set(num(_cert.n), _length - 1);
        }
        else
            premise = CountVector(_expected[k - 1]);
        for (size_t r = 1; r < height; ++r)
            expect(rows[r] == premise, at + "premise row " + std::to_string(r) + " is not " +
                    (base ? string("NU-shaped") : "a permutation of vector " + std::to_string(k - 1)));
    }

    const TraceCertificate & _cert;
    const Structure & _s;
    CheckReport _report;
    bool _b = false;
    BigInt _length;
    vector<vector<BigInt>> _expected;
    std::map<unsigned, bool> _chains;
};

} // namespace

auto check_certificate(const TraceCertificate & cert, const Structure & structure) -> CheckReport
{
    return Checker(cert, structure).run();
}

} // namespace polyclone
