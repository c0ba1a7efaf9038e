#pragma once

#include <string>
#include <utility>
#include <vector>

#include "idealred/bidet.hpp"
#include "idealred/polynomial.hpp"

namespace idealred {

enum class IdealMode { Det, Pfaff };

// Ambient sizes: (n, m) for Det; (2n, 2n) for Pfaff.
struct Ambient {
  unsigned n = 0;
  unsigned m = 0;
  static Ambient det(unsigned n, unsigned m) { return {n, m}; }
  static Ambient pfaff(unsigned two_n) { return {two_n, two_n}; }
};

struct StandardExpansion {
  IdealMode mode = IdealMode::Det;
  Ambient ambient;
  std::vector<std::pair<BideterminantRef, u64>> det_terms;
  std::vector<std::pair<BipfaffianRef, u64>> pf_terms;

  std::size_t size() const { return mode == IdealMode::Det ? det_terms.size() : pf_terms.size(); }
  std::vector<Partition> shapes() const;
  SparsePolynomial reexpand(const PrimeField& f) const;
  bool operator==(const StandardExpansion& o) const;
};

struct StraightenOptions {
  unsigned degree_cap = 6;
  unsigned det_ambient_cap = 4;    // n, m
  unsigned pfaff_ambient_cap = 6;  // 2n
  bool reverse_enumeration = false;
};

// Unique expansion of f over standard bideterminants (Det) or standard bipfaffians
// (Pfaff), solved block by block per multidegree. Throws CapExceeded beyond the
// caps; a singular or inconsistent block is an internal error (std::logic_error).
StandardExpansion straighten(const SparsePolynomial& f, Ambient amb, IdealMode mode,
                             const StraightenOptions& opt = {});

struct MembershipVerdict {
  bool member = false;
  std::vector<Partition> shapes;  // one entry per expansion term
};
// Member iff every standard term has first row >= r (Det) or >= 2r (Pfaff).
MembershipVerdict certify_membership(const SparsePolynomial& f, unsigned r, Ambient amb, IdealMode mode,
                                     const StraightenOptions& opt = {});

enum class PipelineStage {
  LeadingTerms,  // f(MX), Pfaff: f(M X M^T)
  TwoSides,      // f(MXN); Pfaff has no separate stage and reuses LeadingTerms
  Reformulated,  // f(M J X J N), Pfaff: f(M J X J M^T)
  KeyLemma,      // g = f(M J D X D' J N) and its lowest v-slice
};

struct PipelineCheck {
  bool ok = true;
  std::vector<std::string> failures;
  unsigned d_min = 0;                    // KeyLemma only
  std::vector<Partition> slice_shapes;   // KeyLemma: shapes found in the lowest v-slice
  std::size_t leading_terms = 0;         // size of the leading set
  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

// Expands the designated intermediate symbolically and checks the structural claims
// about it (see the tests for the exact list). Tiny instances only: n, m <= 3 (2n <= 6)
// and deg f <= 3, otherwise CapExceeded.
PipelineCheck symbolic_pipeline_check(const SparsePolynomial& f, PipelineStage stage, unsigned r, Ambient amb,
                                      IdealMode mode);

// Symbolic g = f(M J D X D' J N) (Det) or f(M J D X D J M^T) (Pfaff), with D the
// v-scaled diagonals. Exposed for pipeline cross-checks on tiny instances.
SparsePolynomial symbolic_g(const SparsePolynomial& f, Ambient amb, IdealMode mode);

// Exponents of the `family` pair variables of m, listed in ordered_pairs(dim) order;
// exponent vectors compare lexicographically in this order.
std::vector<unsigned> pair_exponents(const Monomial& m, Family family, unsigned dim);

}  // namespace idealred
