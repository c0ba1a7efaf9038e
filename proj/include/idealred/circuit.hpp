#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idealred/field.hpp"
#include "idealred/polynomial.hpp"

namespace idealred {

using GateId = std::uint32_t;

enum class GateKind : std::uint8_t { Input, Constant, Sum, Product, Oracle };
std::string gate_kind_name(GateKind k);

// Evaluator gets the oracle inputs in order (arity residues) and returns f there.
using OracleFn = std::function<u64(const u64*)>;

struct OracleSpec {
  unsigned arity = 0;
  unsigned degree = 0;
  OracleFn evaluator;
  bool concurrent_safe = false;

  OracleSpec() = default;
  OracleSpec(unsigned arity_, unsigned degree_, OracleFn fn, bool safe = false);
  // f over the listed variables; input k of the gate feeds inputs[k].
  static OracleSpec from_polynomial(const SparsePolynomial& f, const std::vector<VariableId>& inputs);
};

// Row-major X variables of an n x m matrix, and the upper triangle of a skew 2n x 2n.
std::vector<VariableId> det_oracle_inputs(unsigned n, unsigned m);
std::vector<VariableId> pfaff_oracle_inputs(unsigned two_n);

// Records every call of a wrapped oracle; replay() answers from the recording and
// throws InvalidArgument on an input vector it never saw.
class OracleTrace {
 public:
  OracleSpec record(const OracleSpec& inner);
  OracleSpec replay(unsigned arity, unsigned degree) const;
  std::size_t calls() const;

 private:
  struct State {
    std::mutex mu;
    std::vector<std::pair<std::vector<u64>, u64>> log;
  };
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

struct AffineForm {
  u64 constant = 0;
  std::vector<std::pair<VariableId, u64>> terms;  // coefficient per variable
  u64 eval(const PrimeField& f, const std::unordered_map<VariableId, u64>& point) const;
  SparsePolynomial to_polynomial(const PrimeField& f) const;
  bool is_zero() const { return constant == 0 && terms.empty(); }
};

struct CircuitMetrics {
  std::uint64_t gates = 0;
  std::uint64_t wires = 0;
  std::uint64_t size = 0;  // gates + wires
  unsigned depth = 0;
  GateKind top = GateKind::Input;
  std::uint64_t oracle_calls = 0;
  std::uint64_t product_gates = 0;
};

// Immutable DAG in CSR form; children precede parents.
class OracleCircuit {
 public:
  const PrimeField& field() const noexcept { return field_; }
  std::size_t gate_count() const noexcept { return kind_.size(); }
  std::size_t wire_count() const noexcept { return children_.size(); }
  GateId output() const noexcept { return output_; }
  GateKind kind(GateId g) const { return static_cast<GateKind>(kind_.at(g)); }
  // Input variable (Input) or constant value (Constant).
  u64 payload(GateId g) const { return payload_.at(g); }
  std::pair<const GateId*, const GateId*> children(GateId g) const {
    return {children_.data() + start_[g], children_.data() + start_[g + 1]};
  }
  const std::uint32_t* weights(GateId g) const { return weights_.data() + start_[g]; }
  unsigned depth(GateId g) const { return depth_.at(g); }
  unsigned oracle_arity() const noexcept { return oracle_arity_; }

  CircuitMetrics metrics() const;
  // Names of problems that disqualify a pipeline output (currently: product gates).
  std::vector<std::string> lint() const;
  std::vector<VariableId> input_variables() const;

  u64 eval(const OracleSpec* spec, const std::function<u64(VariableId)>& point) const;
  u64 eval(const OracleSpec* spec, const std::unordered_map<VariableId, u64>& point) const;

 private:
  friend class CircuitBuilder;
  PrimeField field_;
  std::vector<std::uint8_t> kind_;
  std::vector<u64> payload_;
  std::vector<std::uint32_t> start_{0};
  std::vector<GateId> children_;
  std::vector<std::uint32_t> weights_;
  std::vector<unsigned> depth_;
  GateId output_ = 0;
  unsigned oracle_arity_ = 0;  // 0 when no oracle gate
};

class CircuitBuilder {
 public:
  explicit CircuitBuilder(const PrimeField& f) { c_.field_ = f; }

  GateId input(VariableId v);  // one gate per variable
  GateId constant(u64 value);
  GateId sum(const std::vector<GateId>& children, const std::vector<u64>& weights);
  GateId product(const std::vector<GateId>& children);
  GateId oracle(const std::vector<GateId>& children);
  // Sum gate computing the affine form (constant fed through a constant-1 gate).
  GateId affine(const AffineForm& form);
  std::size_t gate_count() const { return c_.kind_.size(); }
  void reserve(std::size_t gates, std::size_t wires);
  OracleCircuit finish(GateId output);

 private:
  GateId push(GateKind k, u64 payload, unsigned depth);
  GateId node(GateKind k, const std::vector<GateId>& children, const std::vector<u64>* weights);
  void check_child(GateId g) const;
  OracleCircuit c_;
  std::unordered_map<VariableId, GateId> inputs_;
  GateId one_ = ~0u;
};

// Gate-by-gate symbolic expansion; oracle gates substitute their inputs into f,
// whose variable inputs[k] receives input k.
SparsePolynomial symbolic_value(const OracleCircuit& c, const SparsePolynomial* f, const std::vector<VariableId>& inputs);

// Depth-2 circuit f(forms[0], ..., forms[arity-1]).
OracleCircuit compose_linear_preimage(const PrimeField& field, const OracleSpec& spec,
                                      const std::vector<AffineForm>& forms);

// Inlines every weighted-sum child of the output sum gate into it and drops
// unreachable gates. Throws InvalidArgument unless the output is a sum gate.
OracleCircuit merge_output_sums(const OracleCircuit& c);

}  // namespace idealred
