#pragma once

// Shared helpers for the test binaries.

#include <algorithm>
#include <random>
#include <unordered_map>
#include <vector>

#include "idealred/bidet.hpp"

namespace testsupport {

using namespace idealred;

inline FpMatrix random_matrix(const PrimeField& f, std::mt19937_64& rng, unsigned r, unsigned c) {
  FpMatrix m(r, c);
  for (auto& v : m.a) v = rng() % f.p();
  return m;
}

inline FpMatrix random_skew(const PrimeField& f, std::mt19937_64& rng, unsigned n) {
  FpMatrix m(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) {
      m(i, j) = rng() % f.p();
      m(j, i) = f.neg(m(i, j));
    }
  return m;
}

inline std::unordered_map<VariableId, u64> as_point(const FpMatrix& x) {
  std::unordered_map<VariableId, u64> pt;
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned j = 0; j < x.cols; ++j) pt[VariableId::x(i + 1, j + 1)] = x(i, j);
  return pt;
}

inline std::unordered_map<VariableId, u64> as_skew_point(const FpMatrix& x) {
  std::unordered_map<VariableId, u64> pt;
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned j = i + 1; j < x.cols; ++j) pt[VariableId::x(i + 1, j + 1)] = x(i, j);
  return pt;
}

inline std::vector<BideterminantRef> standard_refs(unsigned maxsize, unsigned n, unsigned m, unsigned minsize = 1) {
  std::vector<BideterminantRef> out;
  for (unsigned d = minsize; d <= maxsize; ++d)
    for (const auto& sigma : enumerate_partitions(d, std::min(n, m)))
      for (const auto& S : enumerate_css(sigma, n))
        for (const auto& T : enumerate_css(sigma, m)) out.emplace_back(Bitableau(S, T), n, m);
  return out;
}

inline std::vector<BipfaffianRef> standard_prefs(unsigned maxsize, unsigned two_n, unsigned minsize = 2) {
  std::vector<BipfaffianRef> out;
  for (unsigned d = minsize; d <= maxsize; d += 2)
    for (const auto& sigma : enumerate_partitions(d, two_n, true))
      for (const auto& S : enumerate_css(sigma, two_n)) out.emplace_back(S, two_n);
  return out;
}

// X-family variables of the ambient matrix (upper triangle when skew).
inline std::vector<VariableId> x_vars(unsigned n, unsigned m, bool skew) {
  std::vector<VariableId> out;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = skew ? i + 1 : 1; j <= m; ++j) out.push_back(VariableId::x(i, j));
  return out;
}

// Random polynomial with `terms` monomials of degree <= maxdeg in the given variables.
inline SparsePolynomial random_poly(const PrimeField& f, std::mt19937_64& rng, const std::vector<VariableId>& vars,
                                    unsigned maxdeg, unsigned terms) {
  SparsePolynomial p(f);
  for (unsigned k = 0; k < terms; ++k) {
    unsigned deg = rng() % (maxdeg + 1);
    std::vector<Monomial::Entry> e;
    for (unsigned i = 0; i < deg; ++i) e.emplace_back(vars[rng() % vars.size()], 1);
    p.add_term(Monomial(e), 1 + rng() % (f.p() - 1));
  }
  return p;
}

inline SparsePolynomial minor_poly(const PrimeField& f, const std::vector<unsigned>& rows,
                                   const std::vector<unsigned>& cols, unsigned n, unsigned m) {
  return expand_bideterminant(f, BideterminantRef(Bitableau(Tableau({rows}), Tableau({cols})), n, m));
}

inline std::vector<unsigned> random_subset(std::mt19937_64& rng, unsigned n, unsigned k) {
  std::vector<unsigned> all(n);
  for (unsigned i = 0; i < n; ++i) all[i] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

// Random nonzero member of I^det_{n,m,r} of degree <= maxdeg: sum of random
// multiples of random r x r minors.
inline SparsePolynomial random_det_member(const PrimeField& f, std::mt19937_64& rng, unsigned n, unsigned m,
                                          unsigned r, unsigned maxdeg, unsigned summands = 3) {
  auto vars = x_vars(n, m, false);
  for (;;) {
    SparsePolynomial out(f);
    for (unsigned k = 0; k < summands; ++k) {
      auto mul = random_poly(f, rng, vars, maxdeg - r, 2);
      out += mul * minor_poly(f, random_subset(rng, n, r), random_subset(rng, m, r), n, m);
    }
    if (!out.is_zero()) return out;
  }
}

// Random nonzero member of I^pfaff_{2n,2r} of degree <= maxdeg.
inline SparsePolynomial random_pfaff_member(const PrimeField& f, std::mt19937_64& rng, unsigned two_n, unsigned r,
                                            unsigned maxdeg, unsigned summands = 3) {
  auto vars = x_vars(two_n, two_n, true);
  for (;;) {
    SparsePolynomial out(f);
    for (unsigned k = 0; k < summands; ++k) {
      auto mul = random_poly(f, rng, vars, maxdeg - r, 2);
      out += mul * expand_bipfaffian(f, BipfaffianRef(Tableau({random_subset(rng, two_n, 2 * r)}), two_n));
    }
    if (!out.is_zero()) return out;
  }
}

}  // namespace testsupport
