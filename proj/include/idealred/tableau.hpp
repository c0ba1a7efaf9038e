#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idealred {

// Weakly decreasing positive parts. The empty partition is allowed (size 0).
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<unsigned> parts);  // throws InvalidArgument unless weakly decreasing, positive

  const std::vector<unsigned>& parts() const noexcept { return parts_; }
  unsigned size() const noexcept;  // |sigma|
  unsigned length() const noexcept { return static_cast<unsigned>(parts_.size()); }
  unsigned first() const noexcept { return parts_.empty() ? 0 : parts_[0]; }
  unsigned operator[](std::size_t i) const { return parts_.at(i); }
  bool all_even() const noexcept;
  Partition transpose() const;
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend bool operator!=(const Partition& a, const Partition& b) { return a.parts_ != b.parts_; }
  // Plain container order, for use as a map key. Not the lex order of lex_compare.
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts_ < b.parts_; }

 private:
  std::vector<unsigned> parts_;
};

// -1, 0, +1. Extending a partition makes it smaller: (5,4,2,1) < (5,4,2).
int lex_compare(const Partition& a, const Partition& b);
inline bool lex_leq(const Partition& a, const Partition& b) { return lex_compare(a, b) <= 0; }

// Rows of positive entries; row i has length shape[i]. Rows are kept as given
// (Sub re-sorts explicitly), so non-standard tableaux are representable.
class Tableau {
 public:
  Tableau() = default;
  explicit Tableau(std::vector<std::vector<unsigned>> rows);  // throws if row lengths are not a partition
  Tableau(std::initializer_list<std::vector<unsigned>> rows) : Tableau(std::vector<std::vector<unsigned>>(rows)) {}

  const std::vector<std::vector<unsigned>>& rows() const noexcept { return rows_; }
  Partition shape() const;
  unsigned entry_sum() const noexcept;  // |T|
  unsigned max_entry() const noexcept;
  bool rows_strictly_increasing() const noexcept;
  // Strictly increasing along rows, nondecreasing down columns.
  bool is_conjugate_semistandard() const noexcept;
  // content[v-1] = number of occurrences of v, for v in [bound].
  std::vector<unsigned> content(unsigned bound) const;
  std::vector<unsigned> flatten() const;
  std::string to_string() const;

  friend bool operator==(const Tableau& a, const Tableau& b) { return a.rows_ == b.rows_; }
  friend bool operator!=(const Tableau& a, const Tableau& b) { return a.rows_ != b.rows_; }
  friend bool operator<(const Tableau& a, const Tableau& b) { return a.rows_ < b.rows_; }

 private:
  std::vector<std::vector<unsigned>> rows_;
};

struct Bitableau {
  Tableau S;
  Tableau T;
  Bitableau(Tableau s, Tableau t);  // throws unless shapes agree
  Partition shape() const { return S.shape(); }
  bool is_standard() const { return S.is_conjugate_semistandard() && T.is_conjugate_semistandard(); }
  friend bool operator==(const Bitableau& a, const Bitableau& b) { return a.S == b.S && a.T == b.T; }
  friend bool operator<(const Bitableau& a, const Bitableau& b) {
    return a.S < b.S || (a.S == b.S && a.T < b.T);
  }
};

// K_sigma: row i is 1..sigma_i.  anti: row i is n-sigma_i+1..n.
Tableau canonical(const Partition& sigma, unsigned n);
Tableau anti_canonical(const Partition& sigma, unsigned n);

struct SubResult {
  Tableau tableau;
  unsigned h = 0;
};
// Sub_{i->j}: rows holding i but not j get i replaced by j, then re-sorted.
SubResult sub(unsigned i, unsigned j, const Tableau& S);

// Row hypothesis needed for Sub_{i->j} to be injective: any row holding a value
// k <= i must contain all of i, i+1, ..., j-1.
bool sub_hypothesis_holds(unsigned i, unsigned j, const Tableau& S);

// All pairs (i,j), 1 <= i < j <= n, in the order (i,j) <= (i',j') iff i<i' or (i=i', j<=j').
std::vector<std::pair<unsigned, unsigned>> ordered_pairs(unsigned n);

struct ChainResult {
  Tableau tableau;
  std::vector<unsigned> h;  // one count per applied pair, in pair order
};
// Applies Sub along ordered_pairs(n) up to and including `upto` (the full chain
// when upto is nullopt). Throws std::logic_error if an intermediate tableau
// violates the row hypothesis, InvalidArgument if S is not conjugate semistandard.
ChainResult sub_chain(const Tableau& S, std::optional<std::pair<unsigned, unsigned>> upto, unsigned n);

// Conjugate semistandard tableaux of shape sigma with entries <= n, in lexicographic
// order of the row-concatenated entries.
std::vector<Tableau> enumerate_css(const Partition& sigma, unsigned n);

// Partitions of exactly d with parts <= maxrow (all even when flagged), in
// decreasing order of the part sequence.
std::vector<Partition> enumerate_partitions(unsigned d, unsigned maxrow, bool even_rows = false);

// Sign (+1/-1) of the permutation sorting `row`; 0 if it has repeated entries.
int sorting_sign(const std::vector<unsigned>& row);

}  // namespace idealred
