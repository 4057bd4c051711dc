#include <cli.hpp>

#include <polyclone/compat.hpp>
#include <polyclone/indicator.hpp>
#include <polyclone/serialize.hpp>
#include <polyclone/structures.hpp>
#include <polyclone/trace.hpp>
#include <polyclone/witness.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

using std::optional;
using std::string;
using std::vector;

namespace polyclone {

namespace {

struct Params
{
    string family;
    vector<unsigned> positional;
    optional<unsigned> n;
    optional<unsigned> m;
};

// Family parameters, given positionally (A n m, B n) or as --n/--m.
struct Resolved
{
    bool b = false;
    unsigned n = 0;
    unsigned m = 2;

    auto name() const -> string
    {
        return b ? "B(" + std::to_string(n) + ")" : "A(" + std::to_string(n) + "," + std::to_string(m) + ")";
    }
};

auto add_family(CLI::App & cmd, Params & p) -> void
{
    cmd.add_option("family", p.family, "structure family: A or B")->required()->check(CLI::IsMember({"A", "B"}));
    cmd.add_option("params", p.positional, "n, then m for the A family");
    cmd.add_option("--n", p.n, "n");
    cmd.add_option("--m", p.m, "m (A family only)");
}

auto resolve(const Params & p) -> Resolved
{
    Resolved r;
    r.b = p.family == "B";
    const size_t wanted = r.b ? 1 : 2;
    if (p.positional.size() > wanted)
        throw UsageError("too many positional parameters for family " + p.family);
    auto pick = [&](const optional<unsigned> & flag, size_t slot, const char * what) -> unsigned {
        if (flag && p.positional.size() > slot)
            throw UsageError(string(what) + " given both positionally and as --" + what);
        if (flag)
            return *flag;
        if (p.positional.size() > slot)
            return p.positional[slot];
        throw UsageError(string("missing parameter ") + what);
    };
    r.n = pick(p.n, 0, "n");
    if (r.b) {
        if (p.m)
            throw UsageError("the B family takes no m");
        SpecB{r.n}.validate();
    }
    else {
        r.m = pick(p.m, 1, "m");
        SpecA{r.n, r.m}.validate();
    }
    return r;
}

auto structure_of(const Resolved & r) -> Structure
{
    return r.b ? gen_structure_B(SpecB{r.n}) : gen_structure_A(SpecA{r.n, r.m});
}

auto header(const Resolved & r) -> Json
{
    Json j{{"family", r.b ? "B" : "A"}, {"n", r.n}};
    if (! r.b)
        j["m"] = r.m;
    return j;
}

auto warn_degenerate(const Resolved & r, std::ostream & err) -> void
{
    if (! r.b && ! SpecA{r.n, r.m}.lower_bound_meaningful())
        err << "warning: A(0,2) only has binary \"NU\" operations; lower-bound claims exclude n = 0, m = 2\n";
}

auto parse_pattern(const string & text) -> vector<unsigned>
{
    vector<unsigned> out;
    std::stringstream ss(text);
    string item;
    while (std::getline(ss, item, ','))
        if (item == "1" || item == "2")
            out.push_back(item == "1" ? 1 : 2);
        else
            throw UsageError("pattern entries must be 1 or 2, got '" + item + "'");
    return out;
}

} // namespace

auto run_cli(const vector<string> & args, std::ostream & out, std::ostream & err) -> int
{
    CLI::App app{"Relational structures with near-unanimity polymorphisms"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned jobs = 1;
    unsigned long long seed = default_seed;
    string output;
    app.add_option("--jobs", jobs, "worker threads for exhaustive checks")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", seed, "seed for sampled verdicts");
    app.add_option("--output", output, "write JSON here instead of standard output");

    Params p;
    auto * gen = app.add_subcommand("gen", "print a structure as JSON");
    add_family(*gen, p);

    unsigned ppcheck_i = 0;
    string pattern;
    bool all_patterns = false;
    auto * ppcheck = app.add_subcommand("ppcheck", "check the relational chain defining a congruence");
    ppcheck->add_option("family", p.family)->required()->check(CLI::IsMember({"A", "B"}));
    ppcheck->add_option("params", p.positional, "n, then i");
    ppcheck->add_option("--n", p.n);
    ppcheck->add_option("--m", p.m, "m (A family, default 2)");
    ppcheck->add_option("--i", ppcheck_i, "congruence index, 1 <= i <= n");
    ppcheck->add_option("--pattern", pattern, "B only: comma separated j per chain factor");
    ppcheck->add_flag("--all-patterns", all_patterns, "B only: check every j pattern");

    string mode = "exact";
    std::uint64_t trials = 100000;
    auto * witness = app.add_subcommand("witness", "verify the witness operation as an NU polymorphism");
    add_family(*witness, p);
    witness->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
    witness->add_option("--trials", trials, "sampled column multisets per relation");

    unsigned k = 0;
    string pin = "nu";
    std::uint64_t node_limit = SolveOptions{}.node_limit;
    auto * decide = app.add_subcommand("decide", "decide whether an NU polymorphism of arity k exists");
    add_family(*decide, p);
    decide->add_option("--k", k, "arity")->required();
    decide->add_option("--pin", pin, "nu or remark")->check(CLI::IsMember({"nu", "remark"}));
    decide->add_option("--node-limit", node_limit);

    string verify_path;
    auto * trace = app.add_subcommand("trace", "build and check a lower-bound certificate");
    add_family(*trace, p);
    trace->add_option("--verify", verify_path, "check this certificate file instead of building one");

    vector<unsigned> bounds_positional;
    optional<unsigned> universe, arity;
    auto * bounds_cmd = app.add_subcommand("bounds", "upper and lower bounds on the minimal NU arity");
    bounds_cmd->add_option("params", bounds_positional, "universe size, then maximal relation arity");
    bounds_cmd->add_option("--universe", universe);
    bounds_cmd->add_option("--arity", arity);

    try {
        vector<string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError & e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const auto budget = Budget::from_environment();
    Json result;
    int code = exit_ok;
    try {
        if (gen->parsed()) {
            const auto r = resolve(p);
            warn_degenerate(r, err);
            result = header(r);
            result["structure"] = structure_to_json(structure_of(r));
        }
        else if (ppcheck->parsed()) {
            if (p.positional.size() > 2)
                throw UsageError("ppcheck takes n and i");
            Params q = p;
            if (p.positional.size() == 2) {
                ppcheck_i = p.positional[1];
                q.positional.pop_back();
            }
            if (p.family == "A" && ! q.m)
                q.m = 2;
            const auto r = resolve(q);
            if (ppcheck_i < 1 || ppcheck_i > r.n)
                throw UsageError("ppcheck requires 1 <= i <= n");
            result = header(r);
            result["i"] = ppcheck_i;
            bool holds = true;
            if (! r.b) {
                if (! pattern.empty() || all_patterns)
                    throw UsageError("j patterns apply to the B family only");
                holds = verify_eq1(SpecA{r.n, r.m}, ppcheck_i);
            }
            else if (all_patterns) {
                const unsigned factors = 2 * ppcheck_i;
                if (factors > 20)
                    throw BudgetExceeded("too many j patterns");
                std::uint64_t checked = 0;
                Json failing = Json::array();
                for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << factors); ++bits, ++checked) {
                    vector<unsigned> pat;
                    for (unsigned f = 0; f < factors; ++f)
                        pat.push_back((bits >> f & 1u) + 1);
                    if (! verify_eq1_B(SpecB{r.n}, ppcheck_i, pat)) {
                        holds = false;
                        failing.push_back(pat);
                    }
                }
                result["patterns"] = checked;
                result["failing_patterns"] = failing;
            }
            else
                holds = verify_eq1_B(SpecB{r.n}, ppcheck_i, parse_pattern(pattern));
            result["holds"] = holds;
            code = holds ? exit_ok : exit_violation;
        }
        else if (witness->parsed()) {
            const auto r = resolve(p);
            warn_degenerate(r, err);
            const auto op = r.b ? SymmetricOp::f_B(r.n) : SymmetricOp::f_A(r.n, r.m);
            const auto s = structure_of(r);
            const bool exact = mode == "exact";
            result = header(r);
            result["arity"] = to_decimal(op.arity());
            result["mode"] = mode;
            if (! exact)
                result["seed"] = seed;
            const bool nu = is_nu_symmetric(op);
            result["nu"] = nu;
            ConservativityReport cons;
            if (exact) {
                if (! fits_u64(op.arity()))
                    throw BudgetExceeded("arity too large for exact mode; use --mode sampled");
                cons = is_conservative_exhaustive(op, static_cast<std::uint64_t>(op.arity()), budget);
            }
            else
                cons = is_conservative_sampled(op, trials, seed);
            result["conservative"] = Json{{"ok", cons.conservative}, {"examined", to_decimal(cons.examined)}};
            if (cons.counterexample)
                result["conservative"]["counterexample"] = counts_to_json(*cons.counterexample, s.domain());

            bool ok = nu && cons.conservative;
            Json rels = Json::array();
            for (const auto & [name, rel] : s.relations()) {
                const auto v = exact ? check_compat_symmetric(op, rel, CompatOptions{budget, jobs})
                                     : check_compat_sampled(op, rel, trials, seed);
                ok = ok && v.ok;
                rels.push_back(Json{{"name", name}, {"verdict", verdict_to_json(v, rel, s.domain())}});
            }
            result["relations"] = std::move(rels);
            result["ok"] = ok;
            code = ok ? exit_ok : exit_violation;
        }
        else if (decide->parsed()) {
            const auto r = resolve(p);
            warn_degenerate(r, err);
            const auto s = structure_of(r);
            optional<Pinning> pinning;
            if (pin == "remark") {
                if (r.b)
                    throw UsageError("remark pinning is defined for the A family only");
                pinning = Pinning::remark(family_a::a, family_a::numeral(r.n));
            }
            const auto report = decide_nu(s, k, pinning, SolveOptions{node_limit}, budget);
            result = header(r);
            result["structure"] = r.name();
            result["arity"] = k;
            result["pinning"] = pin;
            result["verdict"] = to_string(report.result.status);
            result["variables"] = report.variables;
            result["constraints"] = report.constraints;
            result["nodes"] = report.result.nodes;
            if (report.result.witness) {
                result["witness"] = table_to_json(*report.result.witness, s.domain());
                result["witness_verified"] = report.witness_verified.value_or(false);
            }
            else
                result["witness"] = nullptr;
            switch (report.result.status) {
            case SolveStatus::sat: code = report.witness_verified.value_or(false) ? exit_ok : exit_violation; break;
            case SolveStatus::unsat: code = exit_violation; break;
            case SolveStatus::unknown: code = exit_budget; break;
            }
        }
        else if (trace->parsed()) {
            const auto r = resolve(p);
            warn_degenerate(r, err);
            const auto s = structure_of(r);
            CheckReport report;
            if (! verify_path.empty()) {
                std::ifstream in(verify_path);
                if (! in)
                    throw UsageError("cannot read " + verify_path);
                Json cert;
                try {
                    cert = Json::parse(in);
                }
                catch (const Json::exception & e) {
                    throw UsageError(string("invalid JSON in ") + verify_path + ": " + e.what());
                }
                report = check_certificate_json(cert.contains("certificate") ? cert["certificate"] : cert, s);
            }
            else {
                const auto cert = r.b ? certify_lowerbound_B(r.n) : certify_lowerbound_A(r.n, r.m);
                result["certificate"] = certificate_to_json(cert);
                report = check_certificate(cert, s);
            }
            result["check"] = Json{{"ok", report.ok}, {"faults", report.faults}};
            code = report.ok ? exit_ok : exit_violation;
        }
        else if (bounds_cmd->parsed()) {
            if (bounds_positional.size() > 2)
                throw UsageError("bounds takes the universe size and the maximal arity");
            auto pick = [&](const optional<unsigned> & flag, size_t slot, const char * what) -> unsigned {
                if (flag && bounds_positional.size() > slot)
                    throw UsageError(string(what) + " given twice");
                if (flag)
                    return *flag;
                if (bounds_positional.size() > slot)
                    return bounds_positional[slot];
                throw UsageError(string("missing parameter ") + what);
            };
            const auto u = pick(universe, 0, "universe");
            const auto a = pick(arity, 1, "arity");
            const auto b = bounds(u, a);
            result = Json{{"universe", u}, {"arity", a}, {"upper", to_decimal(b.upper)}};
            if (b.lower)
                result["lower"] = to_decimal(*b.lower);
            else {
                result["lower"] = nullptr;
                result["lower_unavailable"] = b.lower_unavailable;
            }
        }
    }
    catch (const UsageError & e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const BudgetExceeded & e) {
        err << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    }
    catch (const CertificateError & e) {
        err << "certificate error: " << e.what() << "\n";
        return exit_violation;
    }

    const string text = result.dump(2) + "\n";
    if (output.empty())
        out << text;
    else {
        std::ofstream file(output);
        if (! file) {
            err << "error: cannot write " << output << "\n";
            return exit_usage;
        }
        file << text;
    }
    return code;
}

} // namespace polyclone
