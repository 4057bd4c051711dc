#pragma once

#include <polyclone/compat.hpp>
#include <polyclone/indicator.hpp>
#include <polyclone/relation.hpp>
#include <polyclone/trace.hpp>
#include <polyclone/witness.hpp>

#include <json.hpp>

namespace polyclone {

// Ordered keys keep the output stable for diffing.
using Json = nlohmann::ordered_json;

// Bignums travel as decimal strings; elements as their domain names.
// Every *_from_json throws UsageError on malformed input.

auto tuple_to_json(const Tuple & t, const Domain & domain) -> Json;
auto tuple_from_json(const Json & j, const Domain & domain) -> Tuple;

// {"arity": k, "domain": d, "tuples": [[...], ...]}
auto relation_to_json(const Relation & r, const Domain & domain) -> Json;
auto relation_from_json(const Json & j, const Domain & domain) -> Relation;

// One tuple per line, entries separated by spaces.
auto relation_to_text(const Relation & r, const Domain & domain) -> std::string;

// {"domain": [...], "relations": [{"name": ..., "arity": ..., "tuples": ...}]}
auto structure_to_json(const Structure & s) -> Json;
auto structure_from_json(const Json & j) -> Structure;

// {"counts": {"a": "2", "0": "1", ...}}; zero counts included
auto counts_to_json(const CountVector & x, const Domain & domain) -> Json;
auto counts_from_json(const Json & j, const Domain & domain) -> CountVector;

// {"mode", "ok", "examined", "seed"?, "violation"?: [{"column": [...], "count": "..."}]}
auto verdict_to_json(const Verdict & v, const Relation & r, const Domain & domain) -> Json;

// {"arity", "values": [...]} with inputs in OpTable order
auto table_to_json(const OpTable & t, const Domain & domain) -> Json;

auto certificate_to_json(const TraceCertificate & cert) -> Json;
auto certificate_from_json(const Json & j) -> TraceCertificate;

// Parse errors are reported as faults.
auto check_certificate_json(const Json & j, const Structure & structure) -> CheckReport;

} // namespace polyclone
