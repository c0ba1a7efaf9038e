#pragma once

#include "idealred/linalg.hpp"
#include "idealred/polynomial.hpp"
#include "idealred/tableau.hpp"

namespace idealred {

// (S|T) over an n x m generic matrix. Rows of S and T are minor index sets.
struct BideterminantRef {
  Bitableau bt;
  unsigned n;
  unsigned m;
  BideterminantRef(Bitableau b, unsigned n_, unsigned m_);  // validates entries and row order
  Partition shape() const { return bt.shape(); }
  friend bool operator==(const BideterminantRef& a, const BideterminantRef& b) {
    return a.bt == b.bt && a.n == b.n && a.m == b.m;
  }
  friend bool operator<(const BideterminantRef& a, const BideterminantRef& b) { return a.bt < b.bt; }
};

// [T] over a 2n x 2n generic skew matrix; every row has even length.
struct BipfaffianRef {
  Tableau tab;
  unsigned two_n;
  BipfaffianRef(Tableau t, unsigned two_n_);
  Partition shape() const { return tab.shape(); }
  friend bool operator==(const BipfaffianRef& a, const BipfaffianRef& b) {
    return a.tab == b.tab && a.two_n == b.two_n;
  }
  friend bool operator<(const BipfaffianRef& a, const BipfaffianRef& b) { return a.tab < b.tab; }
};

SparsePolynomial expand_bideterminant(const PrimeField& f, const BideterminantRef& ref);
SparsePolynomial expand_bipfaffian(const PrimeField& f, const BipfaffianRef& ref);

u64 eval_bideterminant(const PrimeField& f, const BideterminantRef& ref, const FpMatrix& x);
u64 eval_bipfaffian(const PrimeField& f, const BipfaffianRef& ref, const FpMatrix& x);

// Same products for arbitrary (possibly unsorted, possibly repeating) index rows.
// Unsorted rows contribute the sign of their sorting permutation; repeats give 0.
u64 eval_bideterminant_rows(const PrimeField& f, const std::vector<std::vector<unsigned>>& S,
                            const std::vector<std::vector<unsigned>>& T, const FpMatrix& x);
u64 eval_bipfaffian_rows(const PrimeField& f, const std::vector<std::vector<unsigned>>& S, const FpMatrix& x);

MultiDegree bideterminant_multidegree(const BideterminantRef& ref);
MultiDegree bipfaffian_multidegree(const BipfaffianRef& ref);

enum class EijSide { Left, Right, Conjugate };

// Numerically checks the elementary-matrix expansion of a bideterminant
// (Left: E X, Right: X E^T) or a bipfaffian (Conjugate: E X E^T): the left side is
// evaluated directly, the right side is rebuilt from all h-fold i->j replacements
// with signs from re-sorting the modified rows.
bool eij_expansion_check(const PrimeField& f, const BideterminantRef& ref, unsigned i, unsigned j, EijSide side,
                         u64 lambda, const FpMatrix& x);
bool eij_expansion_check(const PrimeField& f, const BipfaffianRef& ref, unsigned i, unsigned j, u64 lambda,
                         const FpMatrix& x);

}  // namespace idealred
