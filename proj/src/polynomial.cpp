#include "idealred/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace idealred {

unsigned Degree::value() const {
  if (!finite_) throw InvalidArgument("degree of the zero polynomial has no integer value");
  return value_;
}

Monomial::Monomial(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& e : entries) {
    if (e.second == 0) continue;
    if (!entries_.empty() && entries_.back().first == e.first)
      entries_.back().second += e.second;
    else
      entries_.push_back(e);
  }
}

Monomial Monomial::of(VariableId v, std::uint32_t e) {
  Monomial m;
  if (e) m.entries_.push_back({v, e});
  return m;
}

std::uint32_t Monomial::exponent(VariableId v) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, VariableId x) { return e.first < x; });
  return (it != entries_.end() && it->first == v) ? it->second : 0;
}

unsigned Monomial::total_degree() const noexcept {
  unsigned d = 0;
  for (const auto& e : entries_) d += e.second;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.entries_.reserve(entries_.size() + o.entries_.size());
  auto a = entries_.begin(), ae = entries_.end();
  auto b = o.entries_.begin(), be = o.entries_.end();
  while (a != ae && b != be) {
    if (a->first < b->first)
      r.entries_.push_back(*a++);
    else if (b->first < a->first)
      r.entries_.push_back(*b++);
    else {
      r.entries_.push_back({a->first, a->second + b->second});
      ++a;
      ++b;
    }
  }
  r.entries_.insert(r.entries_.end(), a, ae);
  r.entries_.insert(r.entries_.end(), b, be);
  return r;
}

Monomial Monomial::without(VariableId v) const {
  Monomial r;
  for (const auto& e : entries_)
    if (e.first != v) r.entries_.push_back(e);
  return r;
}

std::string Monomial::to_string() const {
  if (entries_.empty()) return "1";
  std::string s;
  for (const auto& e : entries_) {
    if (!s.empty()) s += "*";
    s += e.first.name();
    if (e.second != 1) s += "^" + std::to_string(e.second);
  }
  return s;
}

bool operator<(const Monomial& a, const Monomial& b) {
  return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                                      [](const Monomial::Entry& x, const Monomial::Entry& y) {
                                        if (x.first != y.first) return x.first < y.first;
                                        return x.second < y.second;
                                      });
}

std::size_t Monomial::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& e : entries_) {
    std::uint64_t x = (static_cast<std::uint64_t>(e.first.code()) << 32) | e.second;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    h = (h ^ x) * 0x100000001b3ULL + (h >> 29);
  }
  return static_cast<std::size_t>(h);
}

MultiDegree operator+(const MultiDegree& a, const MultiDegree& b) {
  if (a.s.size() != b.s.size() || a.t.size() != b.t.size()) throw InvalidArgument("multidegree size mismatch");
  MultiDegree r = a;
  for (std::size_t i = 0; i < r.s.size(); ++i) r.s[i] += b.s[i];
  for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] += b.t[i];
  return r;
}

// ---------------------------------------------------------------------------

SparsePolynomial SparsePolynomial::constant(const PrimeField& f, u64 c) {
  SparsePolynomial p(f);
  p.add_term(Monomial(), c % f.p());
  return p;
}

SparsePolynomial SparsePolynomial::variable(const PrimeField& f, VariableId v) {
  SparsePolynomial p(f);
  p.add_term(Monomial::of(v), 1);
  return p;
}

SparsePolynomial SparsePolynomial::term(const PrimeField& f, const Monomial& m, u64 c) {
  SparsePolynomial p(f);
  p.add_term(m, c % f.p());
  return p;
}

SparsePolynomial SparsePolynomial::skew_x(const PrimeField& f, unsigned i, unsigned j) {
  if (i == j) return SparsePolynomial(f);
  if (i < j) return variable(f, VariableId::x(i, j));
  return -variable(f, VariableId::x(j, i));
}

std::vector<std::pair<Monomial, u64>> SparsePolynomial::sorted_terms() const {
  std::vector<std::pair<Monomial, u64>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void SparsePolynomial::add_term(const Monomial& m, u64 c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = field_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

u64 SparsePolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

Degree SparsePolynomial::total_degree() const {
  if (terms_.empty()) return Degree::neg_infinity();
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return Degree(d);
}

Degree SparsePolynomial::degree_in(VariableId v) const {
  if (terms_.empty()) return Degree::neg_infinity();
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max<unsigned>(d, m.exponent(v));
  return Degree(d);
}

std::vector<VariableId> SparsePolynomial::variables() const {
  std::vector<VariableId> vs;
  for (const auto& [m, c] : terms_)
    for (const auto& e : m.entries()) vs.push_back(e.first);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool SparsePolynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  unsigned d = terms_.begin()->first.total_degree();
  for (const auto& [m, c] : terms_)
    if (m.total_degree() != d) return false;
  return true;
}

void SparsePolynomial::check_field(const SparsePolynomial& o) const {
  if (field_ != o.field_)
    throw ConfigurationError("polynomials over different primes: " + std::to_string(field_.p()) + " vs " +
                             std::to_string(o.field_.p()));
}

SparsePolynomial SparsePolynomial::operator+(const SparsePolynomial& o) const {
  SparsePolynomial r = *this;
  r += o;
  return r;
}

SparsePolynomial SparsePolynomial::operator-(const SparsePolynomial& o) const {
  SparsePolynomial r = *this;
  r -= o;
  return r;
}

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& o) {
  check_field(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SparsePolynomial& SparsePolynomial::operator-=(const SparsePolynomial& o) {
  check_field(o);
  for (const auto& [m, c] : o.terms_) add_term(m, field_.neg(c));
  return *this;
}

SparsePolynomial SparsePolynomial::operator*(const SparsePolynomial& o) const {
  check_field(o);
  SparsePolynomial r(field_);
  if (terms_.empty() || o.terms_.empty()) return r;
  r.terms_.reserve(terms_.size() * o.terms_.size());
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, field_.mul(c1, c2));
  return r;
}

SparsePolynomial SparsePolynomial::operator-() const { return scale(field_.neg(1 % field_.p())); }

SparsePolynomial SparsePolynomial::scale(u64 c) const {
  c %= field_.p();
  SparsePolynomial r(field_);
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& [m, a] : terms_) r.terms_.emplace(m, field_.mul(a, c));
  return r;
}

SparsePolynomial SparsePolynomial::pow(unsigned k) const {
  SparsePolynomial r = constant(field_, 1);
  SparsePolynomial base = *this;
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

SparsePolynomial SparsePolynomial::substitute(const std::map<VariableId, SparsePolynomial>& map) const {
  for (const auto& [v, img] : map) check_field(img);
  // Cache of computed powers per substituted variable.
  std::map<VariableId, std::vector<SparsePolynomial>> powers;
  auto power_of = [&](VariableId v, std::uint32_t e) -> const SparsePolynomial& {
    auto& vec = powers[v];
    if (vec.empty()) vec.push_back(constant(field_, 1));
    while (vec.size() <= e) vec.push_back(vec.back() * map.at(v));
    return vec[e];
  };
  SparsePolynomial r(field_);
  for (const auto& [m, c] : terms_) {
    std::vector<Monomial::Entry> kept;
    SparsePolynomial acc = constant(field_, c);
    for (const auto& e : m.entries()) {
      if (map.count(e.first))
        acc = acc * power_of(e.first, e.second);
      else
        kept.push_back(e);
    }
    if (!kept.empty()) acc = acc * term(field_, Monomial(kept), 1);
    r += acc;
  }
  return r;
}

u64 SparsePolynomial::eval(const std::unordered_map<VariableId, u64>& point) const {
  u64 total = 0;
  for (const auto& [m, c] : terms_) {
    u64 t = c;
    for (const auto& e : m.entries()) {
      auto it = point.find(e.first);
      if (it == point.end()) throw InvalidArgument("no value assigned to variable " + e.first.name());
      t = field_.mul(t, field_.pow(it->second % field_.p(), e.second));
    }
    total = field_.add(total, t);
  }
  return total;
}

SparsePolynomial SparsePolynomial::coeff_of(VariableId v, unsigned i) const {
  SparsePolynomial r(field_);
  for (const auto& [m, c] : terms_)
    if (m.exponent(v) == i) r.add_term(m.without(v), c);
  return r;
}

std::map<Monomial, SparsePolynomial> SparsePolynomial::split_by(bool (*is_outer)(VariableId)) const {
  std::map<Monomial, SparsePolynomial> out;
  for (const auto& [m, c] : terms_) {
    std::vector<Monomial::Entry> outer, inner;
    for (const auto& e : m.entries()) (is_outer(e.first) ? outer : inner).push_back(e);
    auto it = out.try_emplace(Monomial(outer), field_).first;
    it->second.add_term(Monomial(inner), c);
  }
  return out;
}

bool SparsePolynomial::operator==(const SparsePolynomial& o) const {
  if (field_ != o.field_ || terms_.size() != o.terms_.size()) return false;
  for (const auto& [m, c] : terms_) {
    auto it = o.terms_.find(m);
    if (it == o.terms_.end() || it->second != c) return false;
  }
  return true;
}

std::string SparsePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : sorted_terms()) {
    long long sc = field_.to_signed(c);
    if (!first) os << (sc < 0 ? " - " : " + ");
    else if (sc < 0) os << "-";
    first = false;
    unsigned long long mag = static_cast<unsigned long long>(sc < 0 ? -sc : sc);
    if (m.is_one())
      os << mag;
    else if (mag == 1)
      os << m.to_string();
    else
      os << mag << "*" << m.to_string();
  }
  return os.str();
}

std::optional<MultiDegree> multidegree(const SparsePolynomial& p, unsigned n, unsigned m) {
  if (p.is_zero()) throw InvalidArgument("multidegree of the zero polynomial");
  std::optional<MultiDegree> common;
  for (const auto& [mono, c] : p.terms()) {
    MultiDegree md{std::vector<unsigned>(n, 0), std::vector<unsigned>(m, 0)};
    for (const auto& [v, e] : mono.entries()) {
      if (v.family() != Family::X || v.i() < 1 || v.i() > n || v.j() < 1 || v.j() > m)
        throw InvalidArgument("multidegree expects X variables within " + std::to_string(n) + "x" +
                              std::to_string(m) + ", found " + v.name());
      md.s[v.i() - 1] += e;
      md.t[v.j() - 1] += e;
    }
    if (!common)
      common = md;
    else if (!(*common == md))
      return std::nullopt;
  }
  return common;
}

std::optional<MultiDegree> multidegree_pfaff(const SparsePolynomial& p, unsigned two_n) {
  if (p.is_zero()) throw InvalidArgument("multidegree of the zero polynomial");
  std::optional<MultiDegree> common;
  for (const auto& [mono, c] : p.terms()) {
    MultiDegree md{std::vector<unsigned>(two_n, 0), {}};
    for (const auto& [v, e] : mono.entries()) {
      if (v.family() != Family::X || v.i() < 1 || v.j() > two_n || v.i() >= v.j())
        throw InvalidArgument("Pfaffian multidegree expects X_i_j with i<j<=" + std::to_string(two_n) +
                              ", found " + v.name());
      md.s[v.i() - 1] += e;
      md.s[v.j() - 1] += e;
    }
    if (!common)
      common = md;
    else if (!(*common == md))
      return std::nullopt;
  }
  return common;
}

}  // namespace idealred
