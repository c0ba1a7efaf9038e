#include "idealred/bidet.hpp"

#include <algorithm>

#include "idealred/errors.hpp"

namespace idealred {

namespace {

void check_rows(const Tableau& t, unsigned bound, const char* what) {
  if (!t.rows_strictly_increasing()) throw InvalidArgument(std::string(what) + " rows must be strictly increasing");
  if (t.max_entry() > bound)
    throw InvalidArgument(std::string(what) + " entry exceeds ambient bound " + std::to_string(bound));
}

std::vector<unsigned> zero_based(const std::vector<unsigned>& row) {
  std::vector<unsigned> r(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) r[k] = row[k] - 1;
  return r;
}

// Sorts a copy of `row` and returns the permutation sign (0 on repeats).
int sorted_with_sign(std::vector<unsigned>& row) {
  int s = sorting_sign(row);
  std::sort(row.begin(), row.end());
  return s;
}

// All ways of applying i->j to exactly h of the eligible rows; calls emit(rows, sign, h).
template <class Emit>
void for_each_replacement(const std::vector<std::vector<unsigned>>& rows, unsigned i, unsigned j, Emit&& emit) {
  std::vector<std::size_t> eligible;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (std::count(r.begin(), r.end(), i) && !std::count(r.begin(), r.end(), j)) eligible.push_back(k);
  }
  for (unsigned mask = 0; mask < (1u << eligible.size()); ++mask) {
    auto mod = rows;
    int sign = 1;
    unsigned h = 0;
    for (std::size_t b = 0; b < eligible.size(); ++b) {
      if (!(mask & (1u << b))) continue;
      auto& r = mod[eligible[b]];
      std::replace(r.begin(), r.end(), i, j);
      sign *= sorted_with_sign(r);
      ++h;
    }
    emit(mod, sign, h);
  }
}

}  // namespace

BideterminantRef::BideterminantRef(Bitableau b, unsigned n_, unsigned m_) : bt(std::move(b)), n(n_), m(m_) {
  check_rows(bt.S, n, "row tableau");
  check_rows(bt.T, m, "column tableau");
}

BipfaffianRef::BipfaffianRef(Tableau t, unsigned two_n_) : tab(std::move(t)), two_n(two_n_) {
  if (!tab.shape().all_even()) throw InvalidArgument("bipfaffian rows must have even length");
  check_rows(tab, two_n, "bipfaffian");
}

SparsePolynomial expand_bideterminant(const PrimeField& f, const BideterminantRef& ref) {
  PolyMatrix X = PolyMatrix::generic(f, ref.n, ref.m);
  SparsePolynomial prod = SparsePolynomial::constant(f, 1);
  const auto& S = ref.bt.S.rows();
  const auto& T = ref.bt.T.rows();
  for (std::size_t r = 0; r < S.size(); ++r) {
    unsigned k = static_cast<unsigned>(S[r].size());
    PolyMatrix minor(f, k, k);
    for (unsigned a = 0; a < k; ++a)
      for (unsigned b = 0; b < k; ++b) minor.at(a, b) = X.at(S[r][a] - 1, T[r][b] - 1);
    prod = prod * sym_det(minor);
  }
  return prod;
}

SparsePolynomial expand_bipfaffian(const PrimeField& f, const BipfaffianRef& ref) {
  SparsePolynomial prod = SparsePolynomial::constant(f, 1);
  for (const auto& row : ref.tab.rows()) {
    unsigned k = static_cast<unsigned>(row.size());
    PolyMatrix minor(f, k, k);
    for (unsigned a = 0; a < k; ++a)
      for (unsigned b = 0; b < k; ++b) minor.at(a, b) = SparsePolynomial::skew_x(f, row[a], row[b]);
    prod = prod * sym_pfaff(minor);
  }
  return prod;
}

u64 eval_bideterminant_rows(const PrimeField& f, const std::vector<std::vector<unsigned>>& S,
                            const std::vector<std::vector<unsigned>>& T, const FpMatrix& x) {
  if (S.size() != T.size()) throw InvalidArgument("row and column tableaux differ in row count");
  u64 prod = 1;
  for (std::size_t r = 0; r < S.size(); ++r) {
    if (S[r].size() != T[r].size()) throw InvalidArgument("row and column tableaux differ in shape");
    auto rs = S[r], cs = T[r];
    int sign = sorted_with_sign(rs) * sorted_with_sign(cs);
    if (sign == 0) return 0;
    for (unsigned v : rs)
      if (v < 1 || v > x.rows) throw InvalidArgument("row index outside the point's dimensions");
    for (unsigned v : cs)
      if (v < 1 || v > x.cols) throw InvalidArgument("column index outside the point's dimensions");
    u64 d = det(f, submatrix(x, zero_based(rs), zero_based(cs)));
    prod = f.mul(prod, sign > 0 ? d : f.neg(d));
  }
  return prod;
}

u64 eval_bipfaffian_rows(const PrimeField& f, const std::vector<std::vector<unsigned>>& S, const FpMatrix& x) {
  u64 prod = 1;
  for (const auto& row : S) {
    auto rs = row;
    int sign = sorted_with_sign(rs);
    if (sign == 0) return 0;
    for (unsigned v : rs)
      if (v < 1 || v > x.rows) throw InvalidArgument("index outside the point's dimensions");
    auto z = zero_based(rs);
    u64 p = pfaff(f, submatrix(x, z, z));
    prod = f.mul(prod, sign > 0 ? p : f.neg(p));
  }
  return prod;
}

u64 eval_bideterminant(const PrimeField& f, const BideterminantRef& ref, const FpMatrix& x) {
  if (x.rows != ref.n || x.cols != ref.m) throw InvalidArgument("point dimensions do not match the ambient size");
  return eval_bideterminant_rows(f, ref.bt.S.rows(), ref.bt.T.rows(), x);
}

u64 eval_bipfaffian(const PrimeField& f, const BipfaffianRef& ref, const FpMatrix& x) {
  if (x.rows != ref.two_n || x.cols != ref.two_n)
    throw InvalidArgument("point dimensions do not match the ambient size");
  return eval_bipfaffian_rows(f, ref.tab.rows(), x);
}

MultiDegree bideterminant_multidegree(const BideterminantRef& ref) {
  return MultiDegree{ref.bt.S.content(ref.n), ref.bt.T.content(ref.m)};
}

MultiDegree bipfaffian_multidegree(const BipfaffianRef& ref) { return MultiDegree{ref.tab.content(ref.two_n), {}}; }

bool eij_expansion_check(const PrimeField& f, const BideterminantRef& ref, unsigned i, unsigned j, EijSide side,
                         u64 lambda, const FpMatrix& x) {
  if (side == EijSide::Conjugate) throw InvalidArgument("conjugate side applies to bipfaffians");
  bool left = side == EijSide::Left;
  unsigned dim = left ? ref.n : ref.m;
  if (i == j || i < 1 || j < 1 || i > dim || j > dim) throw InvalidArgument("bad elementary index pair");
  FpMatrix e = FpMatrix::identity(dim);
  e(i - 1, j - 1) = lambda;
  FpMatrix moved = left ? mul(f, e, x) : mul(f, x, e.transpose());
  u64 lhs = eval_bideterminant(f, ref, moved);

  const auto& S = ref.bt.S.rows();
  const auto& T = ref.bt.T.rows();
  u64 rhs = 0;
  for_each_replacement(left ? S : T, i, j, [&](const std::vector<std::vector<unsigned>>& rows, int sign, unsigned h) {
    if (sign == 0) return;
    u64 v = left ? eval_bideterminant_rows(f, rows, T, x) : eval_bideterminant_rows(f, S, rows, x);
    v = f.mul(v, f.pow(lambda, h));
    rhs = sign > 0 ? f.add(rhs, v) : f.sub(rhs, v);
  });
  return lhs == rhs;
}

bool eij_expansion_check(const PrimeField& f, const BipfaffianRef& ref, unsigned i, unsigned j, u64 lambda,
                         const FpMatrix& x) {
  unsigned dim = ref.two_n;
  if (i == j || i < 1 || j < 1 || i > dim || j > dim) throw InvalidArgument("bad elementary index pair");
  FpMatrix e = FpMatrix::identity(dim);
  e(i - 1, j - 1) = lambda;
  u64 lhs = eval_bipfaffian(f, ref, mul(f, mul(f, e, x), e.transpose()));
  u64 rhs = 0;
  for_each_replacement(ref.tab.rows(), i, j, [&](const std::vector<std::vector<unsigned>>& rows, int sign, unsigned h) {
    if (sign == 0) return;
    u64 v = f.mul(eval_bipfaffian_rows(f, rows, x), f.pow(lambda, h));
    rhs = sign > 0 ? f.add(rhs, v) : f.sub(rhs, v);
  });
  return lhs == rhs;
}

}  // namespace idealred
