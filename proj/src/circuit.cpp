#include "idealred/circuit.hpp"

#include <algorithm>
#include <map>

#include "idealred/errors.hpp"

namespace idealred {

std::string gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::Input: return "input";
    case GateKind::Constant: return "constant";
    case GateKind::Sum: return "sum";
    case GateKind::Product: return "product";
    case GateKind::Oracle: return "oracle";
  }
  return "?";
}

OracleSpec::OracleSpec(unsigned arity_, unsigned degree_, OracleFn fn, bool safe)
    : arity(arity_), degree(degree_), evaluator(std::move(fn)), concurrent_safe(safe) {
  if (arity == 0) throw InvalidArgument("oracle arity must be positive");
  if (degree == 0) throw InvalidArgument("oracle degree must be at least 1");
  if (!evaluator) throw InvalidArgument("oracle evaluator missing");
}

OracleSpec OracleSpec::from_polynomial(const SparsePolynomial& f, const std::vector<VariableId>& inputs) {
  std::unordered_map<VariableId, unsigned> slot;
  for (unsigned k = 0; k < inputs.size(); ++k) slot[inputs[k]] = k;
  // Flat term list: coefficient, then (slot, exponent) pairs.
  struct Term {
    u64 coef;
    std::vector<std::pair<unsigned, std::uint32_t>> powers;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (const auto& [m, c] : f.sorted_terms()) {
    Term t{c, {}};
    for (const auto& [v, e] : m.entries()) {
      auto it = slot.find(v);
      if (it == slot.end()) throw InvalidArgument("oracle polynomial uses " + v.name() + " outside its input list");
      t.powers.emplace_back(it->second, e);
    }
    terms->push_back(std::move(t));
  }
  if (f.is_zero() || f.total_degree().value() == 0) throw InvalidArgument("oracle polynomial must have degree >= 1");
  PrimeField field = f.field();
  OracleFn fn = [terms, field](const u64* in) {
    u64 acc = 0;
    for (const auto& t : *terms) {
      u64 v = t.coef;
      for (auto [s, e] : t.powers) v = field.mul(v, e == 1 ? in[s] : field.pow(in[s], e));
      acc = field.add(acc, v);
    }
    return acc;
  };
  return OracleSpec(static_cast<unsigned>(inputs.size()), f.total_degree().value(), std::move(fn), true);
}

std::vector<VariableId> det_oracle_inputs(unsigned n, unsigned m) {
  std::vector<VariableId> out;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = 1; j <= m; ++j) out.push_back(VariableId::x(i, j));
  return out;
}

std::vector<VariableId> pfaff_oracle_inputs(unsigned two_n) {
  std::vector<VariableId> out;
  for (unsigned i = 1; i <= two_n; ++i)
    for (unsigned j = i + 1; j <= two_n; ++j) out.push_back(VariableId::x(i, j));
  return out;
}

OracleSpec OracleTrace::record(const OracleSpec& inner) {
  auto st = state_;
  OracleFn fn = [st, inner](const u64* in) {
    u64 out = inner.evaluator(in);
    std::lock_guard<std::mutex> lock(st->mu);
    st->log.emplace_back(std::vector<u64>(in, in + inner.arity), out);
    return out;
  };
  return OracleSpec(inner.arity, inner.degree, std::move(fn), inner.concurrent_safe);
}

OracleSpec OracleTrace::replay(unsigned arity, unsigned degree) const {
  auto table = std::make_shared<std::map<std::vector<u64>, u64>>();
  {
    std::lock_guard<std::mutex> lock(state_->mu);
    for (const auto& [in, out] : state_->log) (*table)[in] = out;
  }
  OracleFn fn = [table, arity](const u64* in) {
    auto it = table->find(std::vector<u64>(in, in + arity));
    if (it == table->end()) throw InvalidArgument("oracle replay: input vector not in the trace");
    return it->second;
  };
  return OracleSpec(arity, degree, std::move(fn), true);
}

std::size_t OracleTrace::calls() const {
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->log.size();
}

u64 AffineForm::eval(const PrimeField& f, const std::unordered_map<VariableId, u64>& point) const {
  u64 acc = constant;
  for (const auto& [v, c] : terms) {
    auto it = point.find(v);
    if (it == point.end()) throw InvalidArgument("affine form: no value for " + v.name());
    acc = f.add(acc, f.mul(c, it->second));
  }
  return acc;
}

SparsePolynomial AffineForm::to_polynomial(const PrimeField& f) const {
  SparsePolynomial p = SparsePolynomial::constant(f, constant);
  for (const auto& [v, c] : terms) p.add_term(Monomial::of(v), c);
  return p;
}

CircuitMetrics OracleCircuit::metrics() const {
  CircuitMetrics m;
  m.gates = kind_.size();
  m.wires = children_.size();
  m.size = m.gates + m.wires;
  m.depth = depth_.empty() ? 0 : depth_[output_];
  m.top = kind_.empty() ? GateKind::Input : static_cast<GateKind>(kind_[output_]);
  for (auto k : kind_) {
    if (static_cast<GateKind>(k) == GateKind::Oracle) ++m.oracle_calls;
    if (static_cast<GateKind>(k) == GateKind::Product) ++m.product_gates;
  }
  return m;
}

std::vector<std::string> OracleCircuit::lint() const {
  std::vector<std::string> out;
  auto m = metrics();
  if (m.product_gates) out.push_back("circuit contains " + std::to_string(m.product_gates) + " product gates");
  return out;
}

std::vector<VariableId> OracleCircuit::input_variables() const {
  std::vector<VariableId> out;
  for (std::size_t g = 0; g < kind_.size(); ++g)
    if (static_cast<GateKind>(kind_[g]) == GateKind::Input)
      out.push_back(VariableId::from_code(static_cast<std::uint32_t>(payload_[g])));
  return out;
}

u64 OracleCircuit::eval(const OracleSpec* spec, const std::function<u64(VariableId)>& point) const {
  if (oracle_arity_ != 0) {
    if (!spec) throw InvalidArgument("circuit has oracle gates but no oracle was supplied");
    if (spec->arity != oracle_arity_)
      throw InvalidArgument("oracle arity " + std::to_string(spec->arity) + " does not match gate arity " +
                            std::to_string(oracle_arity_));
  }
  std::vector<u64> val(kind_.size());
  std::vector<u64> buf(oracle_arity_);
  for (std::size_t g = 0; g < kind_.size(); ++g) {
    const GateId* ch = children_.data() + start_[g];
    std::size_t cnt = start_[g + 1] - start_[g];
    switch (static_cast<GateKind>(kind_[g])) {
      case GateKind::Input:
        val[g] = point(VariableId::from_code(static_cast<std::uint32_t>(payload_[g]))) % field_.p();
        break;
      case GateKind::Constant:
        val[g] = payload_[g];
        break;
      case GateKind::Sum: {
        const std::uint32_t* w = weights_.data() + start_[g];
        u64 acc = 0;
        for (std::size_t k = 0; k < cnt; ++k) acc = field_.reduce(acc + static_cast<u64>(w[k]) * val[ch[k]]);
        val[g] = acc;
        break;
      }
      case GateKind::Product: {
        u64 acc = 1;
        for (std::size_t k = 0; k < cnt; ++k) acc = field_.mul(acc, val[ch[k]]);
        val[g] = acc;
        break;
      }
      case GateKind::Oracle:
        for (std::size_t k = 0; k < cnt; ++k) buf[k] = val[ch[k]];
        val[g] = spec->evaluator(buf.data()) % field_.p();
        break;
    }
  }
  return val.at(output_);
}

u64 OracleCircuit::eval(const OracleSpec* spec, const std::unordered_map<VariableId, u64>& point) const {
  return eval(spec, [&](VariableId v) {
    auto it = point.find(v);
    if (it == point.end()) throw InvalidArgument("no value for input " + v.name());
    return it->second;
  });
}

GateId CircuitBuilder::push(GateKind k, u64 payload, unsigned depth) {
  if (c_.kind_.size() >= 0xffffffffu) throw CapExceeded("circuit exceeds 2^32 gates");
  c_.kind_.push_back(static_cast<std::uint8_t>(k));
  c_.payload_.push_back(payload);
  c_.start_.push_back(static_cast<std::uint32_t>(c_.children_.size()));
  c_.depth_.push_back(depth);
  return static_cast<GateId>(c_.kind_.size() - 1);
}

void CircuitBuilder::check_child(GateId g) const {
  if (g >= c_.kind_.size()) throw InvalidArgument("child gate " + std::to_string(g) + " does not exist yet");
}

void CircuitBuilder::reserve(std::size_t gates, std::size_t wires) {
  c_.kind_.reserve(gates);
  c_.payload_.reserve(gates);
  c_.start_.reserve(gates + 1);
  c_.depth_.reserve(gates);
  c_.children_.reserve(wires);
  c_.weights_.reserve(wires);
}

GateId CircuitBuilder::input(VariableId v) {
  auto it = inputs_.find(v);
  if (it != inputs_.end()) return it->second;
  GateId g = push(GateKind::Input, v.code(), 0);
  inputs_.emplace(v, g);
  return g;
}

GateId CircuitBuilder::constant(u64 value) { return push(GateKind::Constant, value % c_.field_.p(), 0); }

GateId CircuitBuilder::node(GateKind k, const std::vector<GateId>& children, const std::vector<u64>* weights) {
  unsigned depth = 0;
  for (GateId ch : children) {
    check_child(ch);
    depth = std::max(depth, c_.depth_[ch]);
  }
  GateId g = push(k, 0, depth + 1);
  for (std::size_t i = 0; i < children.size(); ++i) {
    c_.children_.push_back(children[i]);
    c_.weights_.push_back(weights ? static_cast<std::uint32_t>((*weights)[i] % c_.field_.p()) : 1u);
  }
  c_.start_[g + 1] = static_cast<std::uint32_t>(c_.children_.size());
  return g;
}

GateId CircuitBuilder::sum(const std::vector<GateId>& children, const std::vector<u64>& weights) {
  if (children.size() != weights.size()) throw InvalidArgument("sum gate: one weight per child");
  return node(GateKind::Sum, children, &weights);
}

GateId CircuitBuilder::product(const std::vector<GateId>& children) { return node(GateKind::Product, children, nullptr); }

GateId CircuitBuilder::oracle(const std::vector<GateId>& children) {
  if (children.empty()) throw InvalidArgument("oracle gate needs inputs");
  if (c_.oracle_arity_ && c_.oracle_arity_ != children.size())
    throw InvalidArgument("oracle gates must all have the same arity");
  c_.oracle_arity_ = static_cast<unsigned>(children.size());
  return node(GateKind::Oracle, children, nullptr);
}

GateId CircuitBuilder::affine(const AffineForm& form) {
  std::vector<GateId> ch;
  std::vector<u64> w;
  if (form.constant) {
    if (one_ == ~0u) one_ = constant(1);
    ch.push_back(one_);
    w.push_back(form.constant);
  }
  for (const auto& [v, c] : form.terms) {
    ch.push_back(input(v));
    w.push_back(c);
  }
  return sum(ch, w);
}

OracleCircuit CircuitBuilder::finish(GateId output) {
  check_child(output);
  c_.output_ = output;
  OracleCircuit out = std::move(c_);
  c_ = OracleCircuit();
  inputs_.clear();
  one_ = ~0u;
  return out;
}

SparsePolynomial symbolic_value(const OracleCircuit& c, const SparsePolynomial* f, const std::vector<VariableId>& inputs) {
  const PrimeField& field = c.field();
  if (c.oracle_arity() && (!f || inputs.size() != c.oracle_arity()))
    throw InvalidArgument("symbolic expansion needs the oracle polynomial and one variable per oracle input");
  std::vector<SparsePolynomial> val(c.gate_count(), SparsePolynomial(field));
  for (std::size_t g = 0; g < c.gate_count(); ++g) {
    GateId id = static_cast<GateId>(g);
    auto [b, e] = c.children(id);
    switch (c.kind(id)) {
      case GateKind::Input:
        val[g] = SparsePolynomial::variable(field, VariableId::from_code(static_cast<std::uint32_t>(c.payload(id))));
        break;
      case GateKind::Constant:
        val[g] = SparsePolynomial::constant(field, c.payload(id));
        break;
      case GateKind::Sum: {
        const std::uint32_t* w = c.weights(id);
        SparsePolynomial acc(field);
        for (const GateId* p = b; p != e; ++p) acc += val[*p].scale(w[p - b]);
        val[g] = std::move(acc);
        break;
      }
      case GateKind::Product: {
        SparsePolynomial acc = SparsePolynomial::constant(field, 1);
        for (const GateId* p = b; p != e; ++p) acc = acc * val[*p];
        val[g] = std::move(acc);
        break;
      }
      case GateKind::Oracle: {
        std::map<VariableId, SparsePolynomial> map;
        for (const GateId* p = b; p != e; ++p) map.emplace(inputs[p - b], val[*p]);
        val[g] = f->substitute(map);
        break;
      }
    }
  }
  return val[c.output()];
}

OracleCircuit compose_linear_preimage(const PrimeField& field, const OracleSpec& spec,
                                      const std::vector<AffineForm>& forms) {
  if (forms.size() != spec.arity)
    throw InvalidArgument("need one affine form per oracle input (" + std::to_string(spec.arity) + ")");
  CircuitBuilder b(field);
  std::vector<GateId> ins;
  for (const auto& form : forms) ins.push_back(b.affine(form));
  return b.finish(b.oracle(ins));
}

OracleCircuit merge_output_sums(const OracleCircuit& c) {
  if (c.kind(c.output()) != GateKind::Sum) throw InvalidArgument("sum merge needs a sum gate at the output");
  const PrimeField& f = c.field();
  // Merged output: child -> accumulated weight, in first-seen order.
  std::vector<GateId> order;
  std::unordered_map<GateId, u64> weight;
  auto add = [&](GateId g, u64 w) {
    auto [it, fresh] = weight.emplace(g, 0);
    if (fresh) order.push_back(g);
    it->second = f.add(it->second, w);
  };
  auto [b0, e0] = c.children(c.output());
  const std::uint32_t* w0 = c.weights(c.output());
  for (const GateId* p = b0; p != e0; ++p) {
    u64 w = w0[p - b0];
    if (c.kind(*p) == GateKind::Sum) {
      auto [b1, e1] = c.children(*p);
      const std::uint32_t* w1 = c.weights(*p);
      for (const GateId* q = b1; q != e1; ++q) add(*q, f.mul(w, w1[q - b1]));
    } else {
      add(*p, w);
    }
  }
  // Copy the gates reachable from the merged children, then the new output.
  std::vector<char> live(c.gate_count(), 0);
  for (GateId g : order) live[g] = 1;
  for (std::size_t g = c.gate_count(); g-- > 0;) {
    if (!live[g]) continue;
    auto [b, e] = c.children(static_cast<GateId>(g));
    for (const GateId* p = b; p != e; ++p) live[*p] = 1;
  }
  CircuitBuilder out(f);
  std::vector<GateId> remap(c.gate_count(), ~0u);
  for (std::size_t g = 0; g < c.gate_count(); ++g) {
    if (!live[g]) continue;
    GateId id = static_cast<GateId>(g);
    auto [b, e] = c.children(id);
    std::vector<GateId> ch;
    for (const GateId* p = b; p != e; ++p) ch.push_back(remap[*p]);
    switch (c.kind(id)) {
      case GateKind::Input: remap[g] = out.input(VariableId::from_code(static_cast<std::uint32_t>(c.payload(id)))); break;
      case GateKind::Constant: remap[g] = out.constant(c.payload(id)); break;
      case GateKind::Sum: {
        const std::uint32_t* w = c.weights(id);
        remap[g] = out.sum(ch, std::vector<u64>(w, w + ch.size()));
        break;
      }
      case GateKind::Product: remap[g] = out.product(ch); break;
      case GateKind::Oracle: remap[g] = out.oracle(ch); break;
    }
  }
  std::vector<GateId> ch;
  std::vector<u64> ws;
  for (GateId g : order) {
    ch.push_back(remap[g]);
    ws.push_back(weight[g]);
  }
  return out.finish(out.sum(ch, ws));
}

}  // namespace idealred
