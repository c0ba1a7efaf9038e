#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idealred/abp.hpp"
#include "idealred/circuit.hpp"
#include "idealred/isolate.hpp"
#include "idealred/oracle_verify.hpp"
#include "idealred/tableau.hpp"

namespace idealred {

struct PipelineParams {
  IdealMode mode = IdealMode::Det;
  unsigned n = 0;  // ambient rows; 2n for Pfaffian runs
  unsigned m = 0;  // ambient columns; equals n for Pfaffian runs
  unsigned r = 0;  // minor size, or half the Pfaffian size
  unsigned d = 0;  // degree bound of f
  double eps = 0.5;
  u64 seed = 1;
  unsigned retry_cap = 16;
  unsigned probes = 3;
  unsigned isolation_constant = 2;  // K = isolation_constant * d
  u64 point_budget = 400000;        // interpolation points of one extraction
  u64 oracle_budget = 2000000;      // oracle gates of a final circuit
  bool allow_small_characteristic = false;
  std::optional<SparsePolynomial> symbolic_f;  // enables symbolic verification on tiny instances

  static PipelineParams det(unsigned n, unsigned m, unsigned r, unsigned d);
  static PipelineParams pfaff(unsigned half, unsigned r, unsigned d);  // ambient 2*half

  Ambient ambient() const { return {n, m}; }
  std::vector<VariableId> oracle_inputs() const;
  // Lambda, Xi, Y, Z (determinantal) or Lambda, Y (Pfaffian).
  std::vector<VariableId> isolation_variables() const;
  // Throws ParameterRejected / InvalidArgument on inconsistent parameters.
  void validate(const PrimeField& f) const;
};
using DetPipelineParams = PipelineParams;
using PfaffPipelineParams = PipelineParams;

struct AttemptRecord {
  unsigned attempt = 0;
  u64 seed = 0;
  IsolationWeights weights;
  u64 w_bound = 0;
  u64 points = 0;
  std::optional<u64> index;
  std::string outcome;  // "ok" or the failure reason
  std::optional<Partition> shape;
  u64 scalar = 0;
  std::optional<bool> symbolic_ok;
};

struct ReductionReport {
  PipelineParams params;
  u64 prime = 0;
  u64 v_lo = 0;  // probed window of v-degrees of the pre-isolation polynomial
  u64 v_hi = 0;
  std::vector<AttemptRecord> attempts;
  std::optional<u64> index;  // chosen coefficient index after dividing out w^lo
  u64 w_shift = 0;           // lo
  u64 d_min = 0;
  std::optional<Partition> shape;
  u64 scalar = 0;  // c in c * (K|K) or c * [K]
  // Final composition (ABP targets).
  std::string target;
  unsigned target_depth = 0;
  unsigned target_vertices = 0;
  u64 delta_points = 0;
  u64 delta_index = 0;
  u64 power = 1;          // the circuit computes g^power (power = p^k)
  u64 normalization = 1;  // multiplier folded into the top weights
  unsigned binomial_t = 0;
  // Verification ladder.
  unsigned probe_checks = 0;
  unsigned probe_agreements = 0;
  std::optional<bool> symbolic_ok;
  CircuitMetrics metrics;
  u64 oracle_budget = 0;
};

// Everything the extraction circuit needs, found without building it.
struct ExtractionPlan {
  PipelineParams params;
  PrimeField field;
  IsolationWeights weights;
  u64 v_lo = 0;
  u64 v_hi = 0;
  u64 w_bound = 0;
  u64 shift = 0;             // w^shift divided out before interpolation
  u64 degree = 0;            // degree bound after the shift
  u64 index = 0;             // first nonzero coefficient
  std::vector<u64> weight;   // top weight per point alpha_j = j + 1 (row times alpha^-shift)
  Partition shape;
  u64 scalar = 0;
  u64 d_min = 0;
  u64 points() const { return degree + 1; }
};

struct ExtractionResult {
  ExtractionPlan plan;
  ReductionReport report;
};

struct CircuitResult {
  OracleCircuit circuit;
  ReductionReport report;
};

// Interpolation sizes for one sampled weight vector, computed without scanning.
struct SizePlan {
  u64 ell = 0;
  u64 K = 0;
  u64 M = 0;
  u64 w_bound = 0;
  u64 z_v = 0;
  u64 v_lo = 0;
  u64 v_hi = 0;
  u64 points = 0;        // extraction oracle calls
  u64 worst_points = 0;  // precomputed budget from parameters alone
};
// v-window of f(L X R) probed at random auxiliary values (two independent probes).
std::pair<u64, u64> probe_v_window(const PipelineParams& params, const PrimeField& field, const OracleSpec& f);
// Worst-case interpolation count from (n, m, r, d, eps) alone.
u64 worst_case_points(const PipelineParams& params);
SizePlan size_plan(const PipelineParams& params, const PrimeField& field, const OracleSpec& f);

// Runs isolation attempts until one is verified; throws IsolationFailure after retry_cap.
ExtractionResult plan_extraction(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 unsigned first_attempt = 0, ReductionReport* carry = nullptr);
OracleCircuit extraction_circuit(const ExtractionPlan& plan);

CircuitResult extract_canonical(const PipelineParams& params, const PrimeField& field, const OracleSpec& f);
CircuitResult extract_canonical_pfaff(const PipelineParams& params, const PrimeField& field, const OracleSpec& f);

// Depth-three circuit over the target's variables computing g (or g^(p^k) when the
// characteristic divides the binomial exponent).
CircuitResult abp_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 const ABP& target, const std::string& label = "abp");
CircuitResult abp_pfaff_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                       const ABP& target, const std::string& label = "abp");
CircuitResult det_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 unsigned t);
CircuitResult imm_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 unsigned width, unsigned length);
CircuitResult pfaff_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                   unsigned t);

// Numeric oracles for the full r x r minor (top-left) and the full 2r Pfaffian, over
// the ambient inputs of params.
OracleSpec leading_minor_oracle(const PrimeField& field, unsigned n, unsigned m, unsigned r);
OracleSpec leading_pfaffian_oracle(const PrimeField& field, unsigned two_n, unsigned r);

}  // namespace idealred
