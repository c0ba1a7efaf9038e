#include "idealred/linalg.hpp"

#include <bit>

#include "idealred/errors.hpp"
#include "idealred/tableau.hpp"

namespace idealred {

FpMatrix FpMatrix::identity(unsigned n) {
  FpMatrix m(n, n);
  for (unsigned i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(cols, rows);
  for (unsigned i = 0; i < rows; ++i)
    for (unsigned j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FpMatrix mul(const PrimeField& f, const FpMatrix& x, const FpMatrix& y) {
  if (x.cols != y.rows) throw InvalidArgument("matrix product dimension mismatch");
  FpMatrix r(x.rows, y.cols);
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned k = 0; k < x.cols; ++k) {
      u64 a = x(i, k);
      if (a == 0) continue;
      for (unsigned j = 0; j < y.cols; ++j) r(i, j) = f.add(r(i, j), f.mul(a, y(k, j)));
    }
  return r;
}

FpMatrix add(const PrimeField& f, const FpMatrix& x, const FpMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw InvalidArgument("matrix sum dimension mismatch");
  FpMatrix r(x.rows, x.cols);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = f.add(x.a[k], y.a[k]);
  return r;
}

FpMatrix scale(const PrimeField& f, const FpMatrix& x, u64 c) {
  FpMatrix r = x;
  for (auto& v : r.a) v = f.mul(v, c);
  return r;
}

FpMatrix submatrix(const FpMatrix& x, const std::vector<unsigned>& rows, const std::vector<unsigned>& cols) {
  FpMatrix r(static_cast<unsigned>(rows.size()), static_cast<unsigned>(cols.size()));
  for (unsigned i = 0; i < rows.size(); ++i)
    for (unsigned j = 0; j < cols.size(); ++j) {
      if (rows[i] >= x.rows || cols[j] >= x.cols) throw InvalidArgument("submatrix index out of range");
      r(i, j) = x(rows[i], cols[j]);
    }
  return r;
}

u64 det(const PrimeField& f, FpMatrix x) {
  if (x.rows != x.cols) throw InvalidArgument("determinant of a non-square matrix");
  unsigned n = x.rows;
  u64 d = 1;
  for (unsigned c = 0; c < n; ++c) {
    unsigned piv = c;
    while (piv < n && x(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (unsigned j = 0; j < n; ++j) std::swap(x(piv, j), x(c, j));
      d = f.neg(d);
    }
    u64 p = x(c, c);
    d = f.mul(d, p);
    u64 ip = f.inv(p);
    for (unsigned r = c + 1; r < n; ++r) {
      u64 factor = f.mul(x(r, c), ip);
      if (factor == 0) continue;
      for (unsigned j = c; j < n; ++j) x(r, j) = f.sub(x(r, j), f.mul(factor, x(c, j)));
    }
  }
  return d;
}

bool is_skew(const PrimeField& f, const FpMatrix& x) {
  if (x.rows != x.cols) return false;
  for (unsigned i = 0; i < x.rows; ++i) {
    if (x(i, i) != 0) return false;
    for (unsigned j = i + 1; j < x.cols; ++j)
      if (x(j, i) != f.neg(x(i, j))) return false;
  }
  return true;
}

u64 pfaff(const PrimeField& f, FpMatrix x) {
  if (!is_skew(f, x)) throw InvalidArgument("Pfaffian of a non-skew-symmetric matrix");
  unsigned n = x.rows;
  if (n % 2) throw InvalidArgument("Pfaffian of an odd-dimensional matrix");
  u64 pf = 1;
  // Simultaneous row/column operations keep the matrix skew and the Pfaffian fixed,
  // except for swaps, which flip its sign.
  auto swap_index = [&](unsigned a, unsigned b) {
    for (unsigned j = 0; j < n; ++j) std::swap(x(a, j), x(b, j));
    for (unsigned i = 0; i < n; ++i) std::swap(x(i, a), x(i, b));
  };
  auto add_index = [&](unsigned dst, unsigned src, u64 c) {  // index dst += c * index src
    for (unsigned j = 0; j < n; ++j) x(dst, j) = f.add(x(dst, j), f.mul(c, x(src, j)));
    for (unsigned i = 0; i < n; ++i) x(i, dst) = f.add(x(i, dst), f.mul(c, x(i, src)));
  };
  for (unsigned k = 0; k + 1 < n; k += 2) {
    unsigned piv = k + 1;
    while (piv < n && x(k, piv) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k + 1) {
      swap_index(piv, k + 1);
      pf = f.neg(pf);
    }
    u64 a = x(k, k + 1);
    pf = f.mul(pf, a);
    u64 ia = f.inv(a);
    for (unsigned i = k + 2; i < n; ++i) {
      u64 c = f.mul(x(k, i), ia);
      if (c) add_index(i, k + 1, f.neg(c));
      u64 e = f.mul(x(k + 1, i), ia);  // x(k+1,k) = -a
      if (e) add_index(i, k, e);
    }
  }
  return pf;
}

PolyMatrix::PolyMatrix(const PrimeField& f, unsigned rows, unsigned cols)
    : field_(f), rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, SparsePolynomial(f)) {}

PolyMatrix PolyMatrix::identity(const PrimeField& f, unsigned n) {
  PolyMatrix m(f, n, n);
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = SparsePolynomial::constant(f, 1);
  return m;
}

PolyMatrix PolyMatrix::generic(const PrimeField& f, unsigned n, unsigned m) {
  PolyMatrix x(f, n, m);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < m; ++j) x.at(i, j) = SparsePolynomial::variable(f, VariableId::x(i + 1, j + 1));
  return x;
}

PolyMatrix PolyMatrix::generic_skew(const PrimeField& f, unsigned two_n) {
  PolyMatrix x(f, two_n, two_n);
  for (unsigned i = 0; i < two_n; ++i)
    for (unsigned j = 0; j < two_n; ++j) x.at(i, j) = SparsePolynomial::skew_x(f, i + 1, j + 1);
  return x;
}

SparsePolynomial& PolyMatrix::at(unsigned i, unsigned j) {
  if (i >= rows_ || j >= cols_) throw InvalidArgument("matrix index out of range");
  return e_[static_cast<std::size_t>(i) * cols_ + j];
}

const SparsePolynomial& PolyMatrix::at(unsigned i, unsigned j) const {
  if (i >= rows_ || j >= cols_) throw InvalidArgument("matrix index out of range");
  return e_[static_cast<std::size_t>(i) * cols_ + j];
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (cols_ != o.rows_) throw InvalidArgument("matrix product dimension mismatch");
  if (field_ != o.field_) throw ConfigurationError("matrices over different primes");
  PolyMatrix r(field_, rows_, o.cols_);
  for (unsigned i = 0; i < rows_; ++i)
    for (unsigned k = 0; k < cols_; ++k) {
      const auto& a = at(i, k);
      if (a.is_zero()) continue;
      for (unsigned j = 0; j < o.cols_; ++j)
        if (!o.at(k, j).is_zero()) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix sum dimension mismatch");
  PolyMatrix r = *this;
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
  return r;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(field_, cols_, rows_);
  for (unsigned i = 0; i < rows_; ++i)
    for (unsigned j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

PolyMatrix PolyMatrix::substitute(const std::map<VariableId, SparsePolynomial>& map) const {
  PolyMatrix r(field_, rows_, cols_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].substitute(map);
  return r;
}

FpMatrix PolyMatrix::eval(const std::unordered_map<VariableId, u64>& point) const {
  FpMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.a[k] = e_[k].eval(point);
  return r;
}

PolyMatrix PolyMatrix::submatrix(unsigned k_rows, unsigned k_cols) const {
  if (k_rows > rows_ || k_cols > cols_) throw InvalidArgument("leading block larger than matrix");
  PolyMatrix r(field_, k_rows, k_cols);
  for (unsigned i = 0; i < k_rows; ++i)
    for (unsigned j = 0; j < k_cols; ++j) r.at(i, j) = at(i, j);
  return r;
}

bool PolyMatrix::is_skew_symmetric() const {
  if (rows_ != cols_) return false;
  for (unsigned i = 0; i < rows_; ++i) {
    if (!at(i, i).is_zero()) return false;
    for (unsigned j = i + 1; j < cols_; ++j)
      if (at(j, i) != -at(i, j)) return false;
  }
  return true;
}

PolyMatrix elementary(const PrimeField& f, unsigned n, unsigned i, unsigned j, const SparsePolynomial& z) {
  if (i == j) throw InvalidArgument("elementary matrix needs i != j");
  if (i < 1 || j < 1 || i > n || j > n) throw InvalidArgument("elementary matrix index out of range");
  PolyMatrix e = PolyMatrix::identity(f, n);
  e.at(i - 1, j - 1) = z;
  return e;
}

PolyMatrix FactoredMatrix::expand() const {
  PolyMatrix m = PolyMatrix::identity(field_, dim_);
  for (const auto& fac : factors_) {
    PolyMatrix e = elementary(field_, dim_, fac.i, fac.j, SparsePolynomial::variable(field_, fac.var));
    m = m * (fac.transposed ? e.transpose() : e);
  }
  return m;
}

FactoredMatrix build_M_det(const PrimeField& f, unsigned n) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  std::vector<FactoredMatrix::Factor> fs;
  for (const auto& [i, j] : ordered_pairs(n)) fs.push_back({i, j, VariableId::lambda(i, j), false});
  return FactoredMatrix(f, n, fs);
}

FactoredMatrix build_N_det(const PrimeField& f, unsigned m) {
  if (m < 1) throw InvalidArgument("dimension must be positive");
  std::vector<FactoredMatrix::Factor> fs;
  auto pairs = ordered_pairs(m);
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
    fs.push_back({it->first, it->second, VariableId::xi(it->first, it->second), true});
  return FactoredMatrix(f, m, fs);
}

FactoredMatrix build_M_pfaff(const PrimeField& f, unsigned two_n) { return build_M_det(f, two_n); }

PolyMatrix anti_diagonal(const PrimeField& f, unsigned k) {
  if (k < 1) throw InvalidArgument("dimension must be positive");
  PolyMatrix j(f, k, k);
  for (unsigned i = 0; i < k; ++i) j.at(i, k - 1 - i) = SparsePolynomial::constant(f, 1);
  return j;
}

PolyMatrix scaled_diag(const PrimeField& f, unsigned k, Family family, VariableId v) {
  if (family != Family::Y && family != Family::Z) throw InvalidArgument("scaled diagonal uses the Y or Z family");
  PolyMatrix d(f, k, k);
  for (unsigned i = 1; i <= k; ++i) {
    VariableId y = VariableId::make(family, i);
    d.at(i - 1, i - 1) = SparsePolynomial::term(f, Monomial({{y, 1}, {v, i}}), 1);
  }
  return d;
}

SparsePolynomial sym_det(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("determinant of a non-square matrix");
  unsigned n = m.rows();
  if (n > kSymbolicDetCap)
    throw CapExceeded("symbolic determinant capped at dimension " + std::to_string(kSymbolicDetCap));
  const PrimeField& f = m.field();
  // dp[mask]: signed sum over injections of the first popcount(mask) rows onto mask.
  std::vector<SparsePolynomial> dp(1u << n, SparsePolynomial(f));
  dp[0] = SparsePolynomial::constant(f, 1);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (dp[mask].is_zero()) continue;
    unsigned row = static_cast<unsigned>(std::popcount(mask));
    if (row == n) continue;
    for (unsigned c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      const auto& a = m.at(row, c);
      if (a.is_zero()) continue;
      unsigned larger = static_cast<unsigned>(std::popcount(mask >> (c + 1)));
      SparsePolynomial t = dp[mask] * a;
      if (larger % 2) t = -t;
      dp[mask | (1u << c)] += t;
    }
  }
  return dp[(1u << n) - 1];
}

int matching_edge_sign(unsigned used_mask, unsigned a, unsigned b) {
  unsigned between = 0;
  for (unsigned k = a + 1; k < b; ++k)
    if (!(used_mask & (1u << k))) ++between;
  return between % 2 ? -1 : 1;
}

SparsePolynomial sym_pfaff(const PolyMatrix& m) {
  if (!m.is_skew_symmetric()) throw InvalidArgument("Pfaffian of a non-skew-symmetric matrix");
  unsigned n = m.rows();
  if (n % 2) throw InvalidArgument("Pfaffian of an odd-dimensional matrix");
  if (n > kSymbolicPfaffCap)
    throw CapExceeded("symbolic Pfaffian capped at dimension " + std::to_string(kSymbolicPfaffCap));
  const PrimeField& f = m.field();
  // dp[mask]: signed sum over partial matchings covering mask, always matching the
  // smallest unused index first.
  std::vector<SparsePolynomial> dp(1u << n, SparsePolynomial(f));
  dp[0] = SparsePolynomial::constant(f, 1);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (dp[mask].is_zero() || mask == (1u << n) - 1) continue;
    unsigned a = static_cast<unsigned>(std::countr_one(mask));
    for (unsigned b = a + 1; b < n; ++b) {
      if (mask & (1u << b)) continue;
      const auto& e = m.at(a, b);
      if (e.is_zero()) continue;
      SparsePolynomial t = dp[mask] * e;
      if (matching_edge_sign(mask, a, b) < 0) t = -t;
      dp[mask | (1u << a) | (1u << b)] += t;
    }
  }
  return dp[(1u << n) - 1];
}

}  // namespace idealred
