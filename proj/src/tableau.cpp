#include "idealred/tableau.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "idealred/errors.hpp"

namespace idealred {

Partition::Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] == 0) throw InvalidArgument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw InvalidArgument("partition parts must be weakly decreasing");
  }
}

unsigned Partition::size() const noexcept {
  unsigned s = 0;
  for (unsigned p : parts_) s += p;
  return s;
}

bool Partition::all_even() const noexcept {
  return std::all_of(parts_.begin(), parts_.end(), [](unsigned p) { return p % 2 == 0; });
}

Partition Partition::transpose() const {
  std::vector<unsigned> t(first(), 0);
  for (unsigned p : parts_)
    for (unsigned c = 0; c < p; ++c) ++t[c];
  return Partition(t);
}

std::string Partition::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
  return s + ")";
}

int lex_compare(const Partition& a, const Partition& b) {
  std::size_t k = std::min(a.length(), b.length());
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  if (a.length() == b.length()) return 0;
  return a.length() > b.length() ? -1 : 1;
}

Tableau::Tableau(std::vector<std::vector<unsigned>> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].empty()) throw InvalidArgument("tableau rows must be nonempty");
    if (i > 0 && rows_[i].size() > rows_[i - 1].size())
      throw InvalidArgument("tableau row lengths must be weakly decreasing");
    for (unsigned v : rows_[i])
      if (v == 0) throw InvalidArgument("tableau entries must be positive");
  }
}

Partition Tableau::shape() const {
  std::vector<unsigned> p;
  for (const auto& r : rows_) p.push_back(static_cast<unsigned>(r.size()));
  return Partition(p);
}

unsigned Tableau::entry_sum() const noexcept {
  unsigned s = 0;
  for (const auto& r : rows_)
    for (unsigned v : r) s += v;
  return s;
}

unsigned Tableau::max_entry() const noexcept {
  unsigned m = 0;
  for (const auto& r : rows_)
    for (unsigned v : r) m = std::max(m, v);
  return m;
}

bool Tableau::rows_strictly_increasing() const noexcept {
  for (const auto& r : rows_)
    for (std::size_t c = 1; c < r.size(); ++c)
      if (r[c] <= r[c - 1]) return false;
  return true;
}

bool Tableau::is_conjugate_semistandard() const noexcept {
  if (!rows_strictly_increasing()) return false;
  for (std::size_t i = 1; i < rows_.size(); ++i)
    for (std::size_t c = 0; c < rows_[i].size(); ++c)
      if (rows_[i][c] < rows_[i - 1][c]) return false;
  return true;
}

std::vector<unsigned> Tableau::content(unsigned bound) const {
  std::vector<unsigned> c(bound, 0);
  for (const auto& r : rows_)
    for (unsigned v : r) {
      if (v > bound) throw InvalidArgument("tableau entry " + std::to_string(v) + " exceeds bound " + std::to_string(bound));
      ++c[v - 1];
    }
  return c;
}

std::vector<unsigned> Tableau::flatten() const {
  std::vector<unsigned> out;
  for (const auto& r : rows_) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::string Tableau::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    s += i ? ",(" : "(";
    for (std::size_t c = 0; c < rows_[i].size(); ++c) s += (c ? "," : "") + std::to_string(rows_[i][c]);
    s += ")";
  }
  return s + "]";
}

Bitableau::Bitableau(Tableau s, Tableau t) : S(std::move(s)), T(std::move(t)) {
  if (S.shape() != T.shape()) throw InvalidArgument("bitableau sides have different shapes");
}

Tableau canonical(const Partition& sigma, unsigned n) {
  if (sigma.first() > n)
    throw InvalidArgument("shape " + sigma.to_string() + " does not fit entries <= " + std::to_string(n));
  std::vector<std::vector<unsigned>> rows;
  for (unsigned p : sigma.parts()) {
    std::vector<unsigned> r(p);
    for (unsigned c = 0; c < p; ++c) r[c] = c + 1;
    rows.push_back(r);
  }
  return Tableau(rows);
}

Tableau anti_canonical(const Partition& sigma, unsigned n) {
  if (sigma.first() > n)
    throw InvalidArgument("shape " + sigma.to_string() + " does not fit entries <= " + std::to_string(n));
  std::vector<std::vector<unsigned>> rows;
  for (unsigned p : sigma.parts()) {
    std::vector<unsigned> r(p);
    for (unsigned c = 0; c < p; ++c) r[c] = n - p + 1 + c;
    rows.push_back(r);
  }
  return Tableau(rows);
}

SubResult sub(unsigned i, unsigned j, const Tableau& S) {
  if (i >= j) throw InvalidArgument("Sub requires i < j, got " + std::to_string(i) + "," + std::to_string(j));
  std::vector<std::vector<unsigned>> rows = S.rows();
  unsigned h = 0;
  for (auto& r : rows) {
    bool has_i = std::find(r.begin(), r.end(), i) != r.end();
    bool has_j = std::find(r.begin(), r.end(), j) != r.end();
    if (has_i && !has_j) {
      std::replace(r.begin(), r.end(), i, j);
      std::sort(r.begin(), r.end());
      ++h;
    }
  }
  return {Tableau(rows), h};
}

bool sub_hypothesis_holds(unsigned i, unsigned j, const Tableau& S) {
  for (const auto& r : S.rows()) {
    bool has_small = std::any_of(r.begin(), r.end(), [&](unsigned v) { return v <= i; });
    if (!has_small) continue;
    for (unsigned v = i; v < j; ++v)
      if (std::find(r.begin(), r.end(), v) == r.end()) return false;
  }
  return true;
}

std::vector<std::pair<unsigned, unsigned>> ordered_pairs(unsigned n) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  return out;
}

ChainResult sub_chain(const Tableau& S, std::optional<std::pair<unsigned, unsigned>> upto, unsigned n) {
  if (!S.is_conjugate_semistandard()) throw InvalidArgument("sub_chain needs a conjugate semistandard tableau");
  if (S.max_entry() > n) throw InvalidArgument("tableau entry exceeds bound " + std::to_string(n));
  ChainResult res{S, {}};
  for (const auto& [i, j] : ordered_pairs(n)) {
    if (!sub_hypothesis_holds(i, j, res.tableau))
      throw std::logic_error("row hypothesis fails before Sub_" + std::to_string(i) + "->" + std::to_string(j) +
                             " on " + res.tableau.to_string());
    SubResult s = sub(i, j, res.tableau);
    res.tableau = s.tableau;
    res.h.push_back(s.h);
    if (upto && *upto == std::make_pair(i, j)) break;
  }
  return res;
}

std::vector<Tableau> enumerate_css(const Partition& sigma, unsigned n) {
  std::vector<Tableau> out;
  if (sigma.first() > n) return out;
  std::vector<std::vector<unsigned>> rows;
  for (unsigned p : sigma.parts()) rows.emplace_back(p, 0);
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t r, std::size_t c) {
    if (r == rows.size()) {
      out.emplace_back(rows);
      return;
    }
    if (c == rows[r].size()) {
      fill(r + 1, 0);
      return;
    }
    unsigned lo = 1;
    if (c > 0) lo = std::max(lo, rows[r][c - 1] + 1);
    if (r > 0) lo = std::max(lo, rows[r - 1][c]);
    // Leave room for the rest of the row.
    unsigned hi = n - static_cast<unsigned>(rows[r].size() - 1 - c);
    for (unsigned v = lo; v <= hi; ++v) {
      rows[r][c] = v;
      fill(r, c + 1);
    }
  };
  fill(0, 0);
  return out;
}

std::vector<Partition> enumerate_partitions(unsigned d, unsigned maxrow, bool even_rows) {
  std::vector<Partition> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned remaining, unsigned cap) {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (unsigned p = std::min(remaining, cap); p >= 1; --p) {
      if (even_rows && p % 2) continue;
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(d, maxrow);
  return out;
}

int sorting_sign(const std::vector<unsigned>& row) {
  int sign = 1;
  for (std::size_t a = 0; a < row.size(); ++a)
    for (std::size_t b = a + 1; b < row.size(); ++b) {
      if (row[a] == row[b]) return 0;
      if (row[a] > row[b]) sign = -sign;
    }
  return sign;
}

}  // namespace idealred
