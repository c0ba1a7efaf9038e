#include "idealred/serialize.hpp"

#include <map>

#include "idealred/errors.hpp"

namespace idealred {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("JSON: missing field '") + key + "'");
  return j.at(key);
}

u64 residue_field(const Json& j, const PrimeField& f) {
  if (j.is_string()) return residue_from_string(j.get<std::string>(), f);
  if (j.is_number_unsigned()) return j.get<u64>() % f.p();
  if (j.is_number_integer()) return f.from_int(j.get<long long>());
  throw InvalidArgument("JSON: residue must be a decimal string or integer");
}

}  // namespace

Json polynomial_to_json(const SparsePolynomial& p) {
  auto vars = p.variables();
  std::map<VariableId, std::size_t> slot;
  Json names = Json::array();
  for (std::size_t k = 0; k < vars.size(); ++k) {
    slot[vars[k]] = k;
    names.push_back(vars[k].name());
  }
  Json terms = Json::array();
  for (const auto& [m, c] : p.sorted_terms()) {
    std::vector<unsigned> exps(vars.size(), 0);
    for (const auto& [v, e] : m.entries()) exps[slot.at(v)] = e;
    terms.push_back({{"exps", exps}, {"coef", residue_to_string(c)}});
  }
  return {{"prime", p.field().p()}, {"vars", names}, {"terms", terms}};
}

SparsePolynomial polynomial_from_json(const Json& j) {
  PrimeField f(j.contains("prime") ? j.at("prime").get<u64>() : PrimeField::kDefaultPrime);
  std::vector<VariableId> vars;
  for (const auto& n : need(j, "vars")) vars.push_back(VariableId::parse(n.get<std::string>()));
  SparsePolynomial p(f);
  for (const auto& t : need(j, "terms")) {
    const auto& exps = need(t, "exps");
    if (exps.size() != vars.size()) throw InvalidArgument("JSON: exponent vector length differs from vars");
    std::vector<Monomial::Entry> e;
    for (std::size_t k = 0; k < vars.size(); ++k) e.emplace_back(vars[k], exps[k].get<std::uint32_t>());
    p.add_term(Monomial(e), residue_field(need(t, "coef"), f));
  }
  return p;
}

Json tableau_to_json(const Tableau& t) { return t.rows(); }

Tableau tableau_from_json(const Json& j) { return Tableau(j.get<std::vector<std::vector<unsigned>>>()); }

Json expansion_to_json(const StandardExpansion& e) {
  Json terms = Json::array();
  for (const auto& [ref, c] : e.det_terms)
    terms.push_back({{"row", tableau_to_json(ref.bt.S)},
                     {"col", tableau_to_json(ref.bt.T)},
                     {"shape", ref.shape().parts()},
                     {"coef", residue_to_string(c)}});
  for (const auto& [ref, c] : e.pf_terms)
    terms.push_back({{"tableau", tableau_to_json(ref.tab)}, {"shape", ref.shape().parts()}, {"coef", residue_to_string(c)}});
  return {{"mode", e.mode == IdealMode::Det ? "det" : "pfaff"},
          {"n", e.ambient.n},
          {"m", e.ambient.m},
          {"terms", terms}};
}

Json circuit_to_json(const OracleCircuit& c) {
  Json gates = Json::array();
  for (GateId g = 0; g < c.gate_count(); ++g) {
    Json gate = {{"id", g}, {"kind", gate_kind_name(c.kind(g))}};
    switch (c.kind(g)) {
      case GateKind::Input:
        gate["var"] = VariableId::from_code(static_cast<std::uint32_t>(c.payload(g))).name();
        break;
      case GateKind::Constant:
        gate["value"] = residue_to_string(c.payload(g));
        break;
      default: {
        auto [b, e] = c.children(g);
        gate["children"] = std::vector<GateId>(b, e);
        if (c.kind(g) == GateKind::Sum) {
          Json ws = Json::array();
          const std::uint32_t* w = c.weights(g);
          for (std::ptrdiff_t k = 0; k < e - b; ++k) ws.push_back(residue_to_string(w[k]));
          gate["weights"] = ws;
        }
      }
    }
    gates.push_back(std::move(gate));
  }
  return {{"prime", c.field().p()}, {"output", c.output()}, {"oracle_arity", c.oracle_arity()}, {"gates", gates}};
}

OracleCircuit circuit_from_json(const Json& j) {
  PrimeField f(need(j, "prime").get<u64>());
  CircuitBuilder b(f);
  std::vector<GateId> remap;
  for (const auto& gate : need(j, "gates")) {
    if (need(gate, "id").get<std::size_t>() != remap.size()) throw InvalidArgument("JSON: gate ids must be 0..N-1 in order");
    std::string kind = need(gate, "kind").get<std::string>();
    std::vector<GateId> ch;
    if (gate.contains("children"))
      for (const auto& c : gate.at("children")) {
        auto id = c.get<std::size_t>();
        if (id >= remap.size()) throw InvalidArgument("JSON: child refers to a later gate");
        ch.push_back(remap[id]);
      }
    GateId g;
    if (kind == "input") {
      std::size_t before = b.gate_count();
      g = b.input(VariableId::parse(need(gate, "var").get<std::string>()));
      if (b.gate_count() == before) throw InvalidArgument("JSON: duplicate input gate");
    } else if (kind == "constant") {
      g = b.constant(residue_field(need(gate, "value"), f));
    } else if (kind == "sum") {
      std::vector<u64> ws;
      for (const auto& w : need(gate, "weights")) ws.push_back(residue_field(w, f));
      g = b.sum(ch, ws);
    } else if (kind == "product") {
      g = b.product(ch);
    } else if (kind == "oracle") {
      g = b.oracle(ch);
    } else {
      throw InvalidArgument("JSON: unknown gate kind '" + kind + "'");
    }
    remap.push_back(g);
  }
  auto out = need(j, "output").get<std::size_t>();
  if (out >= remap.size()) throw InvalidArgument("JSON: output gate out of range");
  return b.finish(remap[out]);
}

Json metrics_to_json(const CircuitMetrics& m) {
  return {{"gates", m.gates},
          {"wires", m.wires},
          {"size", m.size},
          {"depth", m.depth},
          {"top_gate", gate_kind_name(m.top)},
          {"oracle_calls", m.oracle_calls},
          {"product_gates", m.product_gates}};
}

Json affine_to_json(const AffineForm& a) {
  Json terms = Json::array();
  for (const auto& [v, c] : a.terms) terms.push_back({v.name(), residue_to_string(c)});
  return {{"constant", residue_to_string(a.constant)}, {"terms", terms}};
}

AffineForm affine_from_json(const Json& j, const PrimeField& f) {
  AffineForm a;
  if (j.contains("constant")) a.constant = residue_field(j.at("constant"), f);
  if (j.contains("terms"))
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 2) throw InvalidArgument("JSON: affine term must be [name, coefficient]");
      u64 c = residue_field(t[1], f);
      if (c) a.terms.emplace_back(VariableId::parse(t[0].get<std::string>()), c);
    }
  return a;
}

Json abp_to_json(const ABP& a) {
  Json edges = Json::array();
  for (const auto& e : a.edges())
    edges.push_back({{"layer", e.layer}, {"from", e.from}, {"to", e.to}, {"label", affine_to_json(e.label)}});
  return {{"prime", a.field().p()}, {"layers", a.layer_sizes()}, {"edges", edges}};
}

ABP abp_from_json(const Json& j) {
  PrimeField f(j.contains("prime") ? j.at("prime").get<u64>() : PrimeField::kDefaultPrime);
  std::vector<AbpEdge> edges;
  for (const auto& e : need(j, "edges"))
    edges.push_back(AbpEdge{need(e, "layer").get<unsigned>(), need(e, "from").get<unsigned>(),
                            need(e, "to").get<unsigned>(), affine_from_json(need(e, "label"), f)});
  return ABP(f, need(j, "layers").get<std::vector<unsigned>>(), std::move(edges));
}

Json weights_to_json(const IsolationWeights& w) {
  Json z = Json::object();
  for (std::size_t k = 0; k < w.vars.size(); ++k) z[w.vars[k].name()] = w.z[k];
  return {{"seed", w.seed},  {"K", w.K},           {"ell", w.ell},
          {"eps", w.eps},    {"M", w.M},           {"z", z},
          {"z_v", w.z_v},    {"deg_v_bound", w.deg_v_bound}, {"deg_w_bound", w.deg_w_bound},
          {"total_w_bound", w.total_w_bound}};
}

Json isolation_stats_to_json(const IsolationStats& s) {
  return {{"M", s.M},       {"K", s.K},       {"ell", s.ell}, {"trials", s.trials},
          {"failures", s.failures}, {"rate", s.rate}, {"bound", s.bound}};
}

Json size_plan_to_json(const SizePlan& s) {
  return {{"ell", s.ell},     {"K", s.K},       {"M", s.M},           {"w_bound", s.w_bound}, {"z_v", s.z_v},
          {"v_lo", s.v_lo},   {"v_hi", s.v_hi}, {"points", s.points}, {"worst_points", s.worst_points}};
}

Json report_to_json(const ReductionReport& r) {
  const auto& p = r.params;
  Json params = {{"mode", p.mode == IdealMode::Det ? "det" : "pfaff"},
                 {"n", p.n},
                 {"m", p.m},
                 {"r", p.r},
                 {"d", p.d},
                 {"eps", p.eps},
                 {"seed", p.seed},
                 {"retry_cap", p.retry_cap},
                 {"probes", p.probes},
                 {"isolation_constant", p.isolation_constant},
                 {"point_budget", p.point_budget},
                 {"oracle_budget", p.oracle_budget},
                 {"allow_small_characteristic", p.allow_small_characteristic},
                 {"symbolic_f", p.symbolic_f.has_value()}};
  Json attempts = Json::array();
  for (const auto& a : r.attempts) {
    Json e = {{"attempt", a.attempt}, {"seed", a.seed},       {"weights", weights_to_json(a.weights)},
              {"w_bound", a.w_bound}, {"points", a.points},   {"outcome", a.outcome},
              {"scalar", residue_to_string(a.scalar)}};
    e["index"] = a.index ? Json(*a.index) : Json();
    e["shape"] = a.shape ? Json(a.shape->parts()) : Json();
    e["symbolic_ok"] = a.symbolic_ok ? Json(*a.symbolic_ok) : Json();
    attempts.push_back(std::move(e));
  }
  Json out = {{"params", params},
              {"prime", r.prime},
              {"v_window", {r.v_lo, r.v_hi}},
              {"attempts", attempts},
              {"attempt_count", r.attempts.size()},
              {"w_shift", r.w_shift},
              {"d_min", r.d_min},
              {"scalar", residue_to_string(r.scalar)},
              {"verification", {{"probe_checks", r.probe_checks}, {"probe_agreements", r.probe_agreements}}},
              {"metrics", metrics_to_json(r.metrics)},
              {"oracle_budget", r.oracle_budget}};
  out["index"] = r.index ? Json(*r.index) : Json();
  out["shape"] = r.shape ? Json(r.shape->parts()) : Json();
  out["verification"]["symbolic_ok"] = r.symbolic_ok ? Json(*r.symbolic_ok) : Json();
  if (!r.target.empty() && r.delta_points == 0) out["target"] = {{"name", r.target}};
  if (r.delta_points)
    out["target"] = {{"name", r.target},
                     {"depth", r.target_depth},
                     {"measured_vertices", r.target_vertices},
                     {"delta_points", r.delta_points},
                     {"delta_index", r.delta_index},
                     {"power", r.power},
                     {"binomial_t", r.binomial_t},
                     {"normalization", residue_to_string(r.normalization)}};
  return out;
}

}  // namespace idealred
