#pragma once

#include <unordered_map>
#include <vector>

#include "idealred/field.hpp"
#include "idealred/polynomial.hpp"

namespace idealred {

// Dense numeric matrix over F_p, row-major residues.
struct FpMatrix {
  unsigned rows = 0;
  unsigned cols = 0;
  std::vector<u64> a;

  FpMatrix() = default;
  FpMatrix(unsigned r, unsigned c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
  static FpMatrix identity(unsigned n);

  u64& operator()(unsigned i, unsigned j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  u64 operator()(unsigned i, unsigned j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  FpMatrix transpose() const;
  bool operator==(const FpMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

FpMatrix mul(const PrimeField& f, const FpMatrix& x, const FpMatrix& y);
FpMatrix add(const PrimeField& f, const FpMatrix& x, const FpMatrix& y);
FpMatrix scale(const PrimeField& f, const FpMatrix& x, u64 c);
// Submatrix on the given 0-based row and column index lists.
FpMatrix submatrix(const FpMatrix& x, const std::vector<unsigned>& rows, const std::vector<unsigned>& cols);
u64 det(const PrimeField& f, FpMatrix x);    // Gaussian elimination
u64 pfaff(const PrimeField& f, FpMatrix x);  // skew congruence elimination; throws unless skew, even
bool is_skew(const PrimeField& f, const FpMatrix& x);

class PolyMatrix {
 public:
  PolyMatrix(const PrimeField& f, unsigned rows, unsigned cols);
  static PolyMatrix identity(const PrimeField& f, unsigned n);
  // Generic n x m matrix of X variables.
  static PolyMatrix generic(const PrimeField& f, unsigned n, unsigned m);
  // Generic 2n x 2n skew matrix: x_ij above the diagonal, -x_ji below.
  static PolyMatrix generic_skew(const PrimeField& f, unsigned two_n);

  const PrimeField& field() const noexcept { return field_; }
  unsigned rows() const noexcept { return rows_; }
  unsigned cols() const noexcept { return cols_; }
  // 0-based access.
  SparsePolynomial& at(unsigned i, unsigned j);
  const SparsePolynomial& at(unsigned i, unsigned j) const;

  PolyMatrix operator*(const PolyMatrix& o) const;
  PolyMatrix operator+(const PolyMatrix& o) const;
  bool operator==(const PolyMatrix& o) const;
  PolyMatrix transpose() const;
  PolyMatrix substitute(const std::map<VariableId, SparsePolynomial>& map) const;
  FpMatrix eval(const std::unordered_map<VariableId, u64>& point) const;
  PolyMatrix submatrix(unsigned k_rows, unsigned k_cols) const;  // leading block
  bool is_skew_symmetric() const;

 private:
  PrimeField field_;
  unsigned rows_;
  unsigned cols_;
  std::vector<SparsePolynomial> e_;
};

// Identity plus z at (i,j), 1-based; i != j.
PolyMatrix elementary(const PrimeField& f, unsigned n, unsigned i, unsigned j, const SparsePolynomial& z);

// Product of elementary factors, kept factored so it can be evaluated at points cheaply.
class FactoredMatrix {
 public:
  struct Factor {
    unsigned i;  // 1-based
    unsigned j;
    VariableId var;
    bool transposed;
  };
  FactoredMatrix(const PrimeField& f, unsigned dim, std::vector<Factor> factors)
      : field_(f), dim_(dim), factors_(std::move(factors)) {}

  unsigned dim() const noexcept { return dim_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  PolyMatrix expand() const;
  // Numeric value with each factor variable replaced by value(var).
  template <class Lookup>
  FpMatrix eval(Lookup&& value) const {
    FpMatrix m = FpMatrix::identity(dim_);
    for (const auto& fac : factors_) {
      u64 z = value(fac.var);
      if (z == 0) continue;
      // Right-multiplying by E_ij(z) adds z*col i to col j; by E_ij(z)^T adds z*col j to col i.
      unsigned src = fac.transposed ? fac.j - 1 : fac.i - 1;
      unsigned dst = fac.transposed ? fac.i - 1 : fac.j - 1;
      for (unsigned r = 0; r < dim_; ++r) m(r, dst) = field_.add(m(r, dst), field_.mul(z, m(r, src)));
    }
    return m;
  }

 private:
  PrimeField field_;
  unsigned dim_;
  std::vector<Factor> factors_;
};

// E_12(l_12) E_13(l_13) ... E_{n-1,n}(l_{n-1,n}) over the Lambda family.
FactoredMatrix build_M_det(const PrimeField& f, unsigned n);
// E_{m-1,m}(xi)^T ... E_12(xi)^T over the Xi family.
FactoredMatrix build_N_det(const PrimeField& f, unsigned m);
// Same shape as build_M_det in dimension 2n (Lambda family).
FactoredMatrix build_M_pfaff(const PrimeField& f, unsigned two_n);

PolyMatrix anti_diagonal(const PrimeField& f, unsigned k);
// diag(y_1 v, y_2 v^2, ..., y_k v^k) for family Y (or Z).
PolyMatrix scaled_diag(const PrimeField& f, unsigned k, Family family, VariableId v);

inline constexpr unsigned kSymbolicDetCap = 8;
inline constexpr unsigned kSymbolicPfaffCap = 12;

SparsePolynomial sym_det(const PolyMatrix& m);    // throws CapExceeded above kSymbolicDetCap
SparsePolynomial sym_pfaff(const PolyMatrix& m);  // perfect-matching sum

// Sign of the matching edge {a,b} (a<b, both unused) in the smallest-first
// expansion: (-1)^(number of unused indices strictly between a and b).
int matching_edge_sign(unsigned used_mask, unsigned a, unsigned b);

}  // namespace idealred
