#pragma once

// JSON interchange formats. Residues are written as decimal strings so that any
// JSON reader keeps them exact.

#include <json.hpp>

#include "idealred/abp.hpp"
#include "idealred/circuit.hpp"
#include "idealred/isolate.hpp"
#include "idealred/oracle_verify.hpp"
#include "idealred/polynomial.hpp"
#include "idealred/reduce.hpp"
#include "idealred/tableau.hpp"

namespace idealred {

using Json = nlohmann::json;

// {"prime": p, "vars": [names], "terms": [{"exps": [..], "coef": "c"}]}
Json polynomial_to_json(const SparsePolynomial& p);
SparsePolynomial polynomial_from_json(const Json& j);

Json tableau_to_json(const Tableau& t);  // list of rows
Tableau tableau_from_json(const Json& j);

Json expansion_to_json(const StandardExpansion& e);

// {"prime", "output", "oracle_arity", "gates": [{"id", "kind", "var"|"value"|"children","weights"}]}
Json circuit_to_json(const OracleCircuit& c);
OracleCircuit circuit_from_json(const Json& j);

Json metrics_to_json(const CircuitMetrics& m);

// {"constant": "c", "terms": [[name, "c"], ...]}
Json affine_to_json(const AffineForm& a);
AffineForm affine_from_json(const Json& j, const PrimeField& f);

// {"prime", "layers": [sizes], "edges": [{"layer", "from", "to", "label"}]}
Json abp_to_json(const ABP& a);
ABP abp_from_json(const Json& j);

Json weights_to_json(const IsolationWeights& w);
Json isolation_stats_to_json(const IsolationStats& s);  // {M, trials, failures, rate, bound, ...}
Json size_plan_to_json(const SizePlan& s);
Json report_to_json(const ReductionReport& r);

}  // namespace idealred
