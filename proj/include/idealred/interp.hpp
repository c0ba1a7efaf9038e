#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "idealred/circuit.hpp"

namespace idealred {

// Coefficient i of a univariate polynomial of degree <= D from its values at the
// consecutive points first, first+1, ..., first+D:  coeff_i = sum_j row[j] * value[j].
struct InterpolationPlan {
  u64 first_point = 0;
  u64 degree = 0;
  u64 target = 0;
  std::vector<u64> points;
  std::vector<u64> row;
  // Full Vandermonde product checked (small D); otherwise checked against random
  // binomial test polynomials (w + a)^D.
  bool exhaustive_check = false;
};

// Throws FieldTooSmall when first + D >= p, InvalidArgument when target > D.
// The row is verified before returning; a failed check throws std::logic_error.
InterpolationPlan build_plan(const PrimeField& f, u64 degree, u64 target, u64 first_point = 0);

u64 apply_plan(const PrimeField& f, const InterpolationPlan& plan, const std::vector<u64>& values);

// Coefficients 0..count-1 of the polynomial of degree < values.size() through
// (first + j, values[j]); one pass handles several value vectors at once.
std::vector<std::vector<u64>> low_coefficients(const PrimeField& f, u64 first_point,
                                               const std::vector<std::vector<u64>>& values, u64 count);

// Smallest index whose coefficient is nonzero for at least one value vector, found by
// doubling the computed prefix; nullopt when every coefficient vanishes.
std::optional<u64> first_nonzero_index(const PrimeField& f, u64 first_point,
                                       const std::vector<std::vector<u64>>& values);

// Copies c into b (inputs shared by variable) and returns the image of its output.
GateId append_circuit(CircuitBuilder& b, const OracleCircuit& c);

using CircuitFamily = std::function<OracleCircuit(u64 alpha)>;

// sum_j row[j] * member(alpha_j). Members whose output is a sum gate are inlined
// into the top sum when merge_top is set, so the depth does not grow.
OracleCircuit extract_coefficient_circuit(const PrimeField& f, const CircuitFamily& family,
                                          const InterpolationPlan& plan, bool merge_top = true);

struct ScanResult {
  u64 index = 0;
  InterpolationPlan plan;
  OracleCircuit circuit;
};

// Smallest i whose extracted coefficient is nonzero at some probe; throws
// IsolationFailure when every coefficient vanishes at every probe.
ScanResult scan_first_nonzero(const PrimeField& f, const CircuitFamily& family, u64 degree,
                              const std::vector<std::unordered_map<VariableId, u64>>& probes,
                              const OracleSpec* spec, u64 first_point = 0);

}  // namespace idealred
