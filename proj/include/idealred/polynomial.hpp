#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idealred/field.hpp"
#include "idealred/variable.hpp"

namespace idealred {

// Total degree, with a sentinel for the zero polynomial that refuses arithmetic.
class Degree {
 public:
  static Degree neg_infinity() { return Degree(); }
  explicit Degree(unsigned v) : value_(v), finite_(true) {}

  bool is_neg_infinity() const noexcept { return !finite_; }
  unsigned value() const;  // throws InvalidArgument on the sentinel

  friend bool operator==(const Degree& a, const Degree& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend bool operator<(const Degree& a, const Degree& b) {
    if (!a.finite_) return b.finite_;
    return b.finite_ && a.value_ < b.value_;
  }

 private:
  Degree() = default;
  unsigned value_ = 0;
  bool finite_ = false;
};

// Sparse exponent vector, entries sorted by variable code, no zero exponents.
class Monomial {
 public:
  using Entry = std::pair<VariableId, std::uint32_t>;

  Monomial() = default;
  explicit Monomial(std::vector<Entry> entries);  // normalizes (sort, merge, drop zeros)
  static Monomial of(VariableId v, std::uint32_t e = 1);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool is_one() const noexcept { return entries_.empty(); }
  std::uint32_t exponent(VariableId v) const noexcept;
  unsigned total_degree() const noexcept;

  Monomial operator*(const Monomial& o) const;
  // Drops `v` from the monomial.
  Monomial without(VariableId v) const;
  std::string to_string() const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.entries_ == b.entries_; }
  friend bool operator<(const Monomial& a, const Monomial& b);

  std::size_t hash() const noexcept;

 private:
  std::vector<Entry> entries_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

// Row counts s and column counts t (determinantal), or a single vector s over [2n] (Pfaffian).
struct MultiDegree {
  std::vector<unsigned> s;
  std::vector<unsigned> t;
  bool operator==(const MultiDegree& o) const { return s == o.s && t == o.t; }
  bool operator<(const MultiDegree& o) const { return std::tie(s, t) < std::tie(o.s, o.t); }
};
MultiDegree operator+(const MultiDegree& a, const MultiDegree& b);

class SparsePolynomial {
 public:
  using TermMap = std::unordered_map<Monomial, u64, MonomialHash>;

  explicit SparsePolynomial(const PrimeField& f = PrimeField()) : field_(f) {}
  static SparsePolynomial constant(const PrimeField& f, u64 c);
  static SparsePolynomial variable(const PrimeField& f, VariableId v);
  static SparsePolynomial term(const PrimeField& f, const Monomial& m, u64 c);
  // Skew-symmetric generic entry: x_ij for i<j, -x_ji for i>j, 0 on the diagonal.
  static SparsePolynomial skew_x(const PrimeField& f, unsigned i, unsigned j);

  const PrimeField& field() const noexcept { return field_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  std::vector<std::pair<Monomial, u64>> sorted_terms() const;

  void add_term(const Monomial& m, u64 c);
  u64 coefficient(const Monomial& m) const;
  // Constant term.
  u64 constant_term() const { return coefficient(Monomial()); }

  Degree total_degree() const;
  Degree degree_in(VariableId v) const;
  std::vector<VariableId> variables() const;
  bool is_homogeneous() const;

  SparsePolynomial operator+(const SparsePolynomial& o) const;
  SparsePolynomial operator-(const SparsePolynomial& o) const;
  SparsePolynomial operator*(const SparsePolynomial& o) const;
  SparsePolynomial operator-() const;
  SparsePolynomial& operator+=(const SparsePolynomial& o);
  SparsePolynomial& operator-=(const SparsePolynomial& o);
  SparsePolynomial scale(u64 c) const;
  SparsePolynomial pow(unsigned k) const;

  // Ring homomorphism; variables missing from `map` pass through unchanged.
  SparsePolynomial substitute(const std::map<VariableId, SparsePolynomial>& map) const;
  // Throws InvalidArgument naming the first uncovered variable.
  u64 eval(const std::unordered_map<VariableId, u64>& point) const;
  FieldElement eval_element(const std::unordered_map<VariableId, u64>& point) const {
    return FieldElement(field_, eval(point));
  }
  SparsePolynomial coeff_of(VariableId v, unsigned i) const;
  // Groups terms by their "outer" part (variables accepted by is_outer): the
  // result maps each outer monomial to the polynomial in the remaining variables.
  std::map<Monomial, SparsePolynomial> split_by(bool (*is_outer)(VariableId)) const;

  bool operator==(const SparsePolynomial& o) const;
  bool operator!=(const SparsePolynomial& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void check_field(const SparsePolynomial& o) const;
  PrimeField field_;
  TermMap terms_;
};

// Common multidegree over the X family, n rows and m columns (determinantal).
std::optional<MultiDegree> multidegree(const SparsePolynomial& p, unsigned n, unsigned m);
// Pfaffian grading: s_i counts occurrences of index i in x_{ab} (a<b), over [2n].
std::optional<MultiDegree> multidegree_pfaff(const SparsePolynomial& p, unsigned two_n);

}  // namespace idealred
