#include <polyclone/serialize.hpp>
#include <polyclone/structures.hpp>

using std::size_t;
using std::string;
using std::vector;

namespace polyclone {

namespace {

auto big(const Json & j) -> BigInt
{
    if (! j.is_string())
        throw UsageError("expected a decimal string, got " + j.dump());
    return from_decimal(j.get<string>());
}

auto family_name(Family f) -> string
{
    switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::custom: return "custom";
    }
    return "custom";
}

auto certificate_domain(Family f, unsigned n) -> Domain
{
    if (f == Family::A)
        return family_a::domain(n);
    if (f == Family::B)
        return family_b::domain(n);
    throw UsageError("certificates exist for the A and B families only");
}

auto mask_to_json(std::uint64_t mask, const Domain & domain) -> Json
{
    Json out = Json::array();
    for (size_t e = 0; e < domain.size(); ++e)
        if (mask >> e & 1u)
            out.push_back(domain.name(element(e)));
    return out;
}

auto mask_from_json(const Json & j, const Domain & domain) -> std::uint64_t
{
    std::uint64_t mask = 0;
    for (const auto & name : j)
        mask |= std::uint64_t{1} << index_of(domain.parse(name.get<string>()));
    return mask;
}

auto bigs_to_json(const vector<BigInt> & xs) -> Json
{
    Json out = Json::array();
    for (const auto & x : xs)
        out.push_back(to_decimal(x));
    return out;
}

auto bigs_from_json(const Json & j) -> vector<BigInt>
{
    vector<BigInt> out;
    for (const auto & x : j)
        out.push_back(big(x));
    return out;
}

template <typename F>
auto guarded(F && f) -> decltype(f())
{
    try {
        return f();
    }
    catch (const Json::exception & e) {
        throw UsageError(string("malformed JSON: ") + e.what());
    }
}

auto step_to_json(const StepCertificate & st, const Domain & domain) -> Json
{
    Json j;
    j["step"] = st.step;
    j["kind"] = st.kind == StepKind::base ? "base" : "induction";
    j["pivot"] = st.pivot;
    Json apps = Json::array();
    for (const auto & app : st.applications) {
        Json a;
        a["relation"] = app.relation;
        a["forbidden"] = tuple_to_json(app.forbidden, domain);
        a["parameters"] = bigs_to_json(app.parameters);
        Json cols = Json::array();
        for (const auto & c : app.columns)
            cols.push_back(Json{{"column", tuple_to_json(c.column, domain)}, {"count", to_decimal(c.count)}});
        a["columns"] = std::move(cols);
        apps.push_back(std::move(a));
    }
    j["applications"] = std::move(apps);
    if (st.lemma) {
        const auto & f = *st.lemma;
        j["lemma"] = Json{{"counts_below_pivot", bigs_to_json(f.counts_below_pivot)},
                {"pivot_count", to_decimal(f.pivot_count)}, {"below_after_pivot", to_decimal(f.below_after_pivot)},
                {"next_pivot_count", to_decimal(f.next_pivot_count)},
                {"next_counts_above_pivot", bigs_to_json(f.next_counts_above_pivot)},
                {"next_below_pivot", to_decimal(f.next_below_pivot)}};
    }
    else
        j["lemma"] = nullptr;
    j["congruence"] = st.congruence ? Json(*st.congruence) : Json(nullptr);
    j["support_relation"] = st.support_relation ? mask_to_json(*st.support_relation, domain) : Json(nullptr);
    return j;
}

auto step_from_json(const Json & j, const Domain & domain) -> StepCertificate
{
    StepCertificate st;
    st.step = j.at("step").get<std::uint64_t>();
    const auto kind = j.at("kind").get<string>();
    if (kind != "base" && kind != "induction")
        throw UsageError("unknown step kind " + kind);
    st.kind = kind == "base" ? StepKind::base : StepKind::induction;
    st.pivot = j.at("pivot").get<unsigned>();
    for (const auto & a : j.at("applications")) {
        LemmaApplication app;
        app.relation = a.at("relation").get<string>();
        app.forbidden = tuple_from_json(a.at("forbidden"), domain);
        app.parameters = bigs_from_json(a.at("parameters"));
        for (const auto & c : a.at("columns"))
            app.columns.push_back({tuple_from_json(c.at("column"), domain), big(c.at("count"))});
        st.applications.push_back(std::move(app));
    }
    if (const auto & f = j.at("lemma"); ! f.is_null())
        st.lemma = PivotLemmaFacts{bigs_from_json(f.at("counts_below_pivot")), big(f.at("pivot_count")),
                big(f.at("below_after_pivot")), big(f.at("next_pivot_count")),
                bigs_from_json(f.at("next_counts_above_pivot")), big(f.at("next_below_pivot"))};
    if (const auto & c = j.at("congruence"); ! c.is_null())
        st.congruence = c.get<unsigned>();
    if (const auto & s = j.at("support_relation"); ! s.is_null())
        st.support_relation = mask_from_json(s, domain);
    return st;
}

} // namespace

auto tuple_to_json(const Tuple & t, const Domain & domain) -> Json
{
    Json out = Json::array();
    for (auto e : t)
        out.push_back(domain.name(e));
    return out;
}

auto tuple_from_json(const Json & j, const Domain & domain) -> Tuple
{
    return guarded([&] {
        if (! j.is_array())
            throw UsageError("a tuple must be a JSON array");
        Tuple t;
        for (const auto & x : j)
            t.push_back(domain.parse(x.get<string>()));
        return t;
    });
}

auto relation_to_json(const Relation & r, const Domain & domain) -> Json
{
    Json tuples = Json::array();
    for (const auto & t : r.tuples())
        tuples.push_back(tuple_to_json(t, domain));
    return Json{{"arity", r.arity()}, {"domain", r.domain_size()}, {"tuples", std::move(tuples)}};
}

auto relation_from_json(const Json & j, const Domain & domain) -> Relation
{
    return guarded([&] {
        const auto arity = j.at("arity").get<size_t>();
        if (j.contains("domain") && j["domain"].get<size_t>() != domain.size())
            throw UsageError("relation domain size does not match");
        vector<Tuple> tuples;
        for (const auto & t : j.at("tuples")) {
            tuples.push_back(tuple_from_json(t, domain));
            if (tuples.back().size() != arity)
                throw UsageError("tuple length does not match the arity");
        }
        return Relation(arity, domain.size(), std::move(tuples));
    });
}

auto relation_to_text(const Relation & r, const Domain & domain) -> string
{
    string out;
    for (const auto & t : r.tuples()) {
        for (size_t p = 0; p < t.size(); ++p)
            out += (p ? " " : "") + domain.name(t[p]);
        out += '\n';
    }
    return out;
}

auto structure_to_json(const Structure & s) -> Json
{
    Json rels = Json::array();
    for (const auto & [name, rel] : s.relations()) {
        Json r{{"name", name}};
        r.update(relation_to_json(rel, s.domain()));
        rels.push_back(std::move(r));
    }
    return Json{{"domain", s.domain().names()}, {"relations", std::move(rels)}};
}

auto structure_from_json(const Json & j) -> Structure
{
    return guarded([&] {
        Domain domain(j.at("domain").get<vector<string>>());
        vector<NamedRelation> rels;
        for (const auto & r : j.at("relations"))
            rels.push_back({r.at("name").get<string>(), relation_from_json(r, domain)});
        return Structure(std::move(domain), std::move(rels));
    });
}

auto counts_to_json(const CountVector & x, const Domain & domain) -> Json
{
    Json counts = Json::object();
    for (size_t e = 0; e < x.domain_size(); ++e)
        counts[domain.name(element(e))] = to_decimal(x.counts()[e]);
    return Json{{"counts", std::move(counts)}};
}

auto counts_from_json(const Json & j, const Domain & domain) -> CountVector
{
    return guarded([&] {
        const auto & counts = j.at("counts");
        if (! counts.is_object())
            throw UsageError("counts must be a JSON object");
        CountVector x(domain.size());
        for (const auto & [name, value] : counts.items())
            x.set(domain.parse(name), big(value));
        return x;
    });
}

auto verdict_to_json(const Verdict & v, const Relation & r, const Domain & domain) -> Json
{
    Json out{{"mode", v.mode == VerdictMode::exact ? "exact" : "sampled"}, {"ok", v.ok},
            {"examined", to_decimal(v.examined)}};
    if (v.seed)
        out["seed"] = *v.seed;
    if (v.violation) {
        Json cols = Json::array();
        const auto tuples = r.tuples();
        for (size_t p = 0; p < v.violation->counts.size() && p < tuples.size(); ++p)
            if (v.violation->counts[p] > 0)
                cols.push_back(Json{{"column", tuple_to_json(tuples[p], domain)},
                        {"count", to_decimal(v.violation->counts[p])}});
        out["violation"] = std::move(cols);
    }
    return out;
}

auto table_to_json(const OpTable & t, const Domain & domain) -> Json
{
    Json values = Json::array();
    for (auto e : t.values())
        values.push_back(domain.name(e));
    return Json{{"arity", t.arity()}, {"values", std::move(values)}};
}

auto certificate_to_json(const TraceCertificate & cert) -> Json
{
    const auto domain = certificate_domain(cert.family, cert.n);
    Json j;
    j["family"] = family_name(cert.family);
    j["n"] = cert.n;
    j["m"] = cert.m;
    j["arity"] = to_decimal(cert.arity);
    Json schedule = Json::array();
    for (const auto & v : cert.schedule)
        schedule.push_back(counts_to_json(v, domain));
    j["schedule"] = std::move(schedule);
    Json steps = Json::array();
    for (const auto & st : cert.steps)
        steps.push_back(step_to_json(st, domain));
    j["steps"] = std::move(steps);
    j["terminal_support"] = mask_to_json(cert.terminal_support, domain);
    return j;
}

auto certificate_from_json(const Json & j) -> TraceCertificate
{
    return guarded([&] {
        TraceCertificate cert;
        const auto family = j.at("family").get<string>();
        if (family == "A")
            cert.family = Family::A;
        else if (family == "B")
            cert.family = Family::B;
        else
            throw UsageError("unknown family " + family);
        cert.n = j.at("n").get<unsigned>();
        if (cert.n > max_trace_n)
            throw UsageError("certificate n exceeds " + std::to_string(max_trace_n));
        cert.m = j.at("m").get<unsigned>();
        const auto domain = certificate_domain(cert.family, cert.n);
        cert.arity = big(j.at("arity"));
        for (const auto & v : j.at("schedule"))
            cert.schedule.push_back(counts_from_json(v, domain));
        for (const auto & st : j.at("steps"))
            cert.steps.push_back(step_from_json(st, domain));
        cert.terminal_support = mask_from_json(j.at("terminal_support"), domain);
        return cert;
    });
}

auto check_certificate_json(const Json & j, const Structure & structure) -> CheckReport
{
    try {
        return check_certificate(certificate_from_json(j), structure);
    }
    catch (const UsageError & e) {
        return CheckReport{false, {string("malformed certificate: ") + e.what()}};
    }
}

} // namespace polyclone
