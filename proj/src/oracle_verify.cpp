#include "idealred/oracle_verify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "idealred/errors.hpp"
#include "idealred/linalg.hpp"

namespace idealred {

namespace {

bool is_x(VariableId v) { return v.family() == Family::X; }
bool is_lambda(VariableId v) { return v.family() == Family::Lambda; }
bool is_lambda_xi(VariableId v) { return v.family() == Family::Lambda || v.family() == Family::Xi; }
bool is_not_x(VariableId v) { return v.family() != Family::X; }

MultiDegree monomial_multidegree(const Monomial& mono, Ambient amb, IdealMode mode) {
  MultiDegree md;
  md.s.assign(amb.n, 0);
  if (mode == IdealMode::Det) md.t.assign(amb.m, 0);
  for (const auto& [v, e] : mono.entries()) {
    md.s[v.i() - 1] += e;
    if (mode == IdealMode::Det)
      md.t[v.j() - 1] += e;
    else
      md.s[v.j() - 1] += e;
  }
  return md;
}

void check_input(const SparsePolynomial& f, Ambient amb, IdealMode mode, const StraightenOptions& opt) {
  if (mode == IdealMode::Det) {
    if (amb.n == 0 || amb.m == 0) throw InvalidArgument("ambient size must be positive");
    if (amb.n > opt.det_ambient_cap || amb.m > opt.det_ambient_cap)
      throw CapExceeded("straighten: ambient size over cap " + std::to_string(opt.det_ambient_cap));
  } else {
    if (amb.n == 0 || amb.n % 2 || amb.n != amb.m) throw InvalidArgument("pfaffian ambient must be 2n x 2n");
    if (amb.n > opt.pfaff_ambient_cap)
      throw CapExceeded("straighten: ambient size over cap " + std::to_string(opt.pfaff_ambient_cap));
  }
  if (!f.is_zero() && f.total_degree().value() > opt.degree_cap)
    throw CapExceeded("straighten: degree over cap " + std::to_string(opt.degree_cap));
  for (VariableId v : f.variables()) {
    if (!is_x(v)) throw InvalidArgument("straighten: variable " + v.name() + " is outside the X family");
    bool ok = mode == IdealMode::Det ? (v.i() >= 1 && v.i() <= amb.n && v.j() >= 1 && v.j() <= amb.m)
                                     : (v.i() >= 1 && v.i() < v.j() && v.j() <= amb.n);
    if (!ok) throw InvalidArgument("straighten: variable " + v.name() + " is outside the ambient matrix");
  }
}

// Solves A c = b over F_p with full pivoting. A is rows x cols (dense, row-major),
// b appended as the last column. Throws logic_error unless the solution is unique.
std::vector<u64> solve_unique(const PrimeField& f, std::vector<std::vector<u64>> a, std::size_t cols) {
  std::size_t rows = a.size();
  std::vector<std::size_t> col_of(cols);
  for (std::size_t c = 0; c < cols; ++c) col_of[c] = c;
  std::size_t rank = 0;
  for (; rank < cols; ++rank) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t c = rank; c < cols && pr == rows; ++c)
      for (std::size_t r = rank; r < rows; ++r)
        if (a[r][c]) {
          pr = r;
          pc = c;
          break;
        }
    if (pr == rows) break;
    std::swap(a[rank], a[pr]);
    if (pc != rank) {
      for (auto& row : a) std::swap(row[rank], row[pc]);
      std::swap(col_of[rank], col_of[pc]);
    }
    u64 inv = f.inv(a[rank][rank]);
    for (std::size_t c = rank; c <= cols; ++c) a[rank][c] = f.mul(a[rank][c], inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][rank] == 0) continue;
      u64 k = a[r][rank];
      for (std::size_t c = rank; c <= cols; ++c) a[r][c] = f.sub(a[r][c], f.mul(k, a[rank][c]));
    }
  }
  if (rank < cols) throw std::logic_error("straighten: standard refs are linearly dependent in a block");
  for (std::size_t r = rank; r < rows; ++r)
    if (a[r][cols]) throw std::logic_error("straighten: block not in the span of standard refs");
  std::vector<u64> x(cols);
  for (std::size_t c = 0; c < cols; ++c) x[col_of[c]] = a[c][cols];
  return x;
}

template <class Ref, class Expand>
std::vector<std::pair<Ref, u64>> solve_block(const PrimeField& f, const SparsePolynomial& block, std::vector<Ref> refs,
                                             Expand&& expand) {
  std::vector<SparsePolynomial> exps;
  exps.reserve(refs.size());
  std::unordered_map<Monomial, std::size_t, MonomialHash> row_of;
  auto row = [&](const Monomial& m) {
    auto [it, fresh] = row_of.emplace(m, row_of.size());
    return it->second;
  };
  for (const auto& ref : refs) {
    exps.push_back(expand(ref));
    for (const auto& [m, c] : exps.back().terms()) row(m);
  }
  for (const auto& [m, c] : block.terms()) row(m);
  std::size_t cols = refs.size();
  std::vector<std::vector<u64>> a(row_of.size(), std::vector<u64>(cols + 1, 0));
  for (std::size_t k = 0; k < cols; ++k)
    for (const auto& [m, c] : exps[k].terms()) a[row_of.at(m)][k] = c;
  for (const auto& [m, c] : block.terms()) a[row_of.at(m)][cols] = c;
  auto x = solve_unique(f, std::move(a), cols);
  std::vector<std::pair<Ref, u64>> out;
  for (std::size_t k = 0; k < cols; ++k)
    if (x[k]) out.emplace_back(refs[k], x[k]);
  return out;
}

std::vector<Tableau> css_with_content(const Partition& sigma, unsigned bound, const std::vector<unsigned>& content) {
  std::vector<Tableau> out;
  for (auto& t : enumerate_css(sigma, bound))
    if (t.content(bound) == content) out.push_back(std::move(t));
  return out;
}

}  // namespace

std::vector<Partition> StandardExpansion::shapes() const {
  std::vector<Partition> out;
  for (const auto& [ref, c] : det_terms) out.push_back(ref.shape());
  for (const auto& [ref, c] : pf_terms) out.push_back(ref.shape());
  return out;
}

SparsePolynomial StandardExpansion::reexpand(const PrimeField& f) const {
  SparsePolynomial out(f);
  for (const auto& [ref, c] : det_terms) out += expand_bideterminant(f, ref).scale(c);
  for (const auto& [ref, c] : pf_terms) out += expand_bipfaffian(f, ref).scale(c);
  return out;
}

bool StandardExpansion::operator==(const StandardExpansion& o) const {
  return mode == o.mode && ambient.n == o.ambient.n && ambient.m == o.ambient.m && det_terms == o.det_terms &&
         pf_terms == o.pf_terms;
}

StandardExpansion straighten(const SparsePolynomial& f, Ambient amb, IdealMode mode, const StraightenOptions& opt) {
  check_input(f, amb, mode, opt);
  const PrimeField& field = f.field();
  StandardExpansion out;
  out.mode = mode;
  out.ambient = amb;

  std::map<MultiDegree, SparsePolynomial> blocks;
  for (const auto& [m, c] : f.terms()) {
    auto md = monomial_multidegree(m, amb, mode);
    auto it = blocks.try_emplace(md, field).first;
    it->second.add_term(m, c);
  }

  for (const auto& [md, block] : blocks) {
    unsigned size = 0;
    for (unsigned s : md.s) size += s;
    if (mode == IdealMode::Det) {
      std::vector<BideterminantRef> refs;
      for (const auto& sigma : enumerate_partitions(size, std::min(amb.n, amb.m))) {
        auto rows = css_with_content(sigma, amb.n, md.s);
        if (rows.empty()) continue;
        auto cols = css_with_content(sigma, amb.m, md.t);
        for (const auto& S : rows)
          for (const auto& T : cols) refs.emplace_back(Bitableau(S, T), amb.n, amb.m);
      }
      if (opt.reverse_enumeration) std::reverse(refs.begin(), refs.end());
      auto terms = solve_block(field, block, std::move(refs),
                               [&](const BideterminantRef& r) { return expand_bideterminant(field, r); });
      out.det_terms.insert(out.det_terms.end(), terms.begin(), terms.end());
    } else {
      std::vector<BipfaffianRef> refs;
      for (const auto& sigma : enumerate_partitions(size, amb.n, true))
        for (auto& T : css_with_content(sigma, amb.n, md.s)) refs.emplace_back(std::move(T), amb.n);
      if (opt.reverse_enumeration) std::reverse(refs.begin(), refs.end());
      auto terms = solve_block(field, block, std::move(refs),
                               [&](const BipfaffianRef& r) { return expand_bipfaffian(field, r); });
      out.pf_terms.insert(out.pf_terms.end(), terms.begin(), terms.end());
    }
  }
  auto by_ref = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::sort(out.det_terms.begin(), out.det_terms.end(), by_ref);
  std::sort(out.pf_terms.begin(), out.pf_terms.end(), by_ref);
  return out;
}

MembershipVerdict certify_membership(const SparsePolynomial& f, unsigned r, Ambient amb, IdealMode mode,
                                     const StraightenOptions& opt) {
  auto exp = straighten(f, amb, mode, opt);
  MembershipVerdict v;
  v.shapes = exp.shapes();
  unsigned need = mode == IdealMode::Det ? r : 2 * r;
  v.member = std::all_of(v.shapes.begin(), v.shapes.end(), [&](const Partition& s) { return s.first() >= need; });
  return v;
}

std::vector<unsigned> pair_exponents(const Monomial& m, Family family, unsigned dim) {
  std::vector<unsigned> out;
  for (auto [i, j] : ordered_pairs(dim)) out.push_back(m.exponent(VariableId::make(family, i, j)));
  return out;
}

namespace {

struct Stage {
  IdealMode mode;
  Ambient amb;
  PolyMatrix left;
  PolyMatrix right;  // unused in Pfaff mode (right = left^T)
};

// f(P X Q), or f(P X P^T) on the skew generic matrix.
SparsePolynomial apply_stage(const SparsePolynomial& f, const Stage& st) {
  const PrimeField& field = f.field();
  std::map<VariableId, SparsePolynomial> map;
  if (st.mode == IdealMode::Det) {
    PolyMatrix img = st.left * PolyMatrix::generic(field, st.amb.n, st.amb.m) * st.right;
    for (unsigned i = 1; i <= st.amb.n; ++i)
      for (unsigned j = 1; j <= st.amb.m; ++j) map.emplace(VariableId::x(i, j), img.at(i - 1, j - 1));
  } else {
    PolyMatrix img = st.left * PolyMatrix::generic_skew(field, st.amb.n) * st.left.transpose();
    for (unsigned i = 1; i <= st.amb.n; ++i)
      for (unsigned j = i + 1; j <= st.amb.n; ++j) map.emplace(VariableId::x(i, j), img.at(i - 1, j - 1));
  }
  return f.substitute(map);
}

Stage make_stage(const PrimeField& field, PipelineStage stage, Ambient amb, IdealMode mode) {
  PolyMatrix M = build_M_det(field, amb.n).expand();
  PolyMatrix N = mode == IdealMode::Det ? build_N_det(field, amb.m).expand() : PolyMatrix::identity(field, amb.m);
  switch (stage) {
    case PipelineStage::LeadingTerms:
      return {mode, amb, M, PolyMatrix::identity(field, amb.m)};
    case PipelineStage::TwoSides:
      return {mode, amb, M, N};
    case PipelineStage::Reformulated:
      return {mode, amb, M * anti_diagonal(field, amb.n), anti_diagonal(field, amb.m) * N};
    case PipelineStage::KeyLemma:
      return {mode, amb, M * anti_diagonal(field, amb.n) * scaled_diag(field, amb.n, Family::Y, VariableId::v()),
              scaled_diag(field, amb.m, Family::Z, VariableId::v()) * anti_diagonal(field, amb.m) * N};
  }
  throw std::logic_error("unknown pipeline stage");
}

// One standard term of f, as a polynomial and with its shape/chain data.
struct GenTerm {
  SparsePolynomial poly;
  Partition shape;
  std::vector<unsigned> key;     // exponent key expected for the leading group
  SparsePolynomial expected;     // leading group up to sign
  std::string label;
};

using GroupKey = std::vector<unsigned>;

std::map<GroupKey, SparsePolynomial> group_by_pairs(const SparsePolynomial& p, Ambient amb, IdealMode mode,
                                                    bool with_xi) {
  std::map<GroupKey, SparsePolynomial> out;
  for (auto& [outer, inner] : p.split_by(with_xi ? &is_lambda_xi : &is_lambda)) {
    GroupKey key = pair_exponents(outer, Family::Lambda, amb.n);
    if (with_xi && mode == IdealMode::Det) {
      auto xi = pair_exponents(outer, Family::Xi, amb.m);
      key.insert(key.end(), xi.begin(), xi.end());
    }
    auto it = out.try_emplace(key, p.field()).first;
    it->second += inner;
  }
  return out;
}

std::string key_string(const GroupKey& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + ")";
}

bool equal_up_to_sign(const SparsePolynomial& a, const SparsePolynomial& b) { return a == b || a == -b; }

void check_symbolic_caps(const SparsePolynomial& f, Ambient amb, IdealMode mode) {
  if (mode == IdealMode::Det) {
    if (amb.n == 0 || amb.m == 0) throw InvalidArgument("ambient size must be positive");
    if (amb.n > 3 || amb.m > 3) throw CapExceeded("symbolic check: n, m must be at most 3");
  } else {
    if (amb.n == 0 || amb.n % 2 || amb.n != amb.m) throw InvalidArgument("pfaffian ambient must be 2n x 2n");
    if (amb.n > 6) throw CapExceeded("symbolic check: 2n must be at most 6");
  }
  if (!f.is_zero() && f.total_degree().value() > 3) throw CapExceeded("symbolic check: degree must be at most 3");
}

}  // namespace

SparsePolynomial symbolic_g(const SparsePolynomial& f, Ambient amb, IdealMode mode) {
  check_symbolic_caps(f, amb, mode);
  return apply_stage(f, make_stage(f.field(), PipelineStage::KeyLemma, amb, mode));
}

PipelineCheck symbolic_pipeline_check(const SparsePolynomial& f, PipelineStage stage, unsigned r, Ambient amb,
                                      IdealMode mode) {
  check_symbolic_caps(f, amb, mode);
  const PrimeField& field = f.field();
  PipelineCheck res;
  if (f.is_zero()) {
    res.fail("zero polynomial has an empty leading set");
    return res;
  }
  unsigned d = f.total_degree().value();
  bool det = mode == IdealMode::Det;
  unsigned need = det ? r : 2 * r;
  auto exp = straighten(f, amb, mode);
  Stage st = make_stage(field, stage, amb, mode);

  if (stage == PipelineStage::KeyLemma) {
    SparsePolynomial g = apply_stage(f, st);
    if (g.is_zero()) {
      res.fail("g vanishes");
      return res;
    }
    unsigned dmin = ~0u;
    for (const auto& [m, c] : g.terms()) dmin = std::min<unsigned>(dmin, m.exponent(VariableId::v()));
    res.d_min = dmin;
    SparsePolynomial slice = g.coeff_of(VariableId::v(), dmin);
    bool hit = false;
    for (auto& [outer, inner] : slice.split_by(&is_not_x)) {
      auto se = straighten(inner, amb, mode);
      if (se.size() != 1) {
        res.fail("slice group " + outer.to_string() + " has " + std::to_string(se.size()) + " standard terms");
        continue;
      }
      Partition sigma = se.shapes()[0];
      res.slice_shapes.push_back(sigma);
      ++res.leading_terms;
      Tableau K = canonical(sigma, amb.n);
      bool canon = det ? (se.det_terms[0].first.bt.S == K && se.det_terms[0].first.bt.T == canonical(sigma, amb.m))
                       : se.pf_terms[0].first.tab == K;
      if (!canon) res.fail("slice group " + outer.to_string() + " is not canonical");
      if (sigma.first() < need) res.fail("slice shape " + sigma.to_string() + " has first row below the ideal bound");
      if ((det ? sigma.size() : sigma.size() / 2) > d) res.fail("slice shape " + sigma.to_string() + " exceeds deg f");
      unsigned weight = det ? 2 * K.entry_sum() : K.entry_sum();
      if (weight == dmin) hit = true;
      else res.fail("slice shape " + sigma.to_string() + " has weight " + std::to_string(weight) + " != d_min");
      std::vector<unsigned> yexp(amb.n), zexp(amb.m);
      for (unsigned i = 1; i <= amb.n; ++i) yexp[i - 1] = outer.exponent(VariableId::y(i));
      for (unsigned j = 1; j <= amb.m; ++j) zexp[j - 1] = outer.exponent(VariableId::z(j));
      if (yexp != K.content(amb.n)) res.fail("slice group " + outer.to_string() + " has Y degrees off the shape");
      if (det && zexp != canonical(sigma, amb.m).content(amb.m))
        res.fail("slice group " + outer.to_string() + " has Z degrees off the shape");
    }
    if (!hit) res.fail("d_min is not the weight of any canonical shape");
    return res;
  }

  bool with_xi = det && stage != PipelineStage::LeadingTerms;
  bool canonical_side = stage == PipelineStage::Reformulated;

  // Per standard term: leading group position and value.
  std::vector<GenTerm> gens;
  auto add_gen = [&](SparsePolynomial poly, const Partition& sigma, const Tableau& S, const Tableau* T,
                     std::string label) {
    GenTerm g{std::move(poly), sigma, {}, SparsePolynomial(field), std::move(label)};
    ChainResult cs = sub_chain(S, std::nullopt, amb.n);
    if (cs.tableau != anti_canonical(sigma, amb.n)) res.fail(g.label + ": chain does not end at the anti-canonical tableau");
    g.key = cs.h;
    if (with_xi) {
      ChainResult ct = sub_chain(*T, std::nullopt, amb.m);
      if (ct.tableau != anti_canonical(sigma, amb.m)) res.fail(g.label + ": column chain does not end anti-canonical");
      g.key.insert(g.key.end(), ct.h.begin(), ct.h.end());
    }
    if (det) {
      Tableau L = canonical_side ? canonical(sigma, amb.n) : anti_canonical(sigma, amb.n);
      Tableau R = !with_xi ? *T : canonical_side ? canonical(sigma, amb.m) : anti_canonical(sigma, amb.m);
      g.expected = expand_bideterminant(field, BideterminantRef(Bitableau(L, R), amb.n, amb.m));
    } else {
      Tableau L = canonical_side ? canonical(sigma, amb.n) : anti_canonical(sigma, amb.n);
      g.expected = expand_bipfaffian(field, BipfaffianRef(L, amb.n));
    }
    gens.push_back(std::move(g));
  };
  for (const auto& [ref, c] : exp.det_terms)
    add_gen(expand_bideterminant(field, ref).scale(c), ref.shape(), ref.bt.S, &ref.bt.T,
            "(" + ref.bt.S.to_string() + "|" + ref.bt.T.to_string() + ")");
  for (const auto& [ref, c] : exp.pf_terms)
    add_gen(expand_bipfaffian(field, ref).scale(c), ref.shape(), ref.tab, nullptr, "[" + ref.tab.to_string() + "]");
  res.leading_terms = gens.size();
  if (gens.empty()) res.fail("empty leading set");

  std::set<std::tuple<GroupKey, Partition, std::string>> triples;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const auto& g = gens[k];
    std::string right_side = det && !with_xi ? exp.det_terms[k].first.bt.T.to_string() : "";
    if (!triples.emplace(g.key, g.shape, right_side).second) res.fail(g.label + ": duplicate leading triple");

    auto groups = group_by_pairs(apply_stage(g.poly, st), amb, mode, with_xi);
    u64 c = det ? exp.det_terms[k].second : exp.pf_terms[k].second;
    auto lead = groups.find(g.key);
    if (lead == groups.end() || !equal_up_to_sign(lead->second, g.expected.scale(c)))
      res.fail(g.label + ": leading group at " + key_string(g.key) + " is not the expected ref");
    for (const auto& [key, inner] : groups) {
      for (unsigned e : key)
        if (e > d) res.fail(g.label + ": exponent above deg f in group " + key_string(key));
      if (key == g.key) continue;
      if (!(key < g.key)) res.fail(g.label + ": group " + key_string(key) + " is not below the leading exponent");
      for (const auto& tau : straighten(inner, amb, mode).shapes())
        if (lex_compare(tau, g.shape) < 0)
          res.fail(g.label + ": group " + key_string(key) + " has shape " + tau.to_string() + " below " +
                   g.shape.to_string());
    }
  }

  // Whole image: the top group is made of expected-form refs only, and every group
  // stays inside the ideal when f does.
  auto groups = group_by_pairs(apply_stage(f, st), amb, mode, with_xi);
  if (groups.empty()) {
    res.fail("image vanishes");
    return res;
  }
  bool f_member = r > 0 && certify_membership(f, r, amb, mode).member;
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    auto se = straighten(it->second, amb, mode);
    bool top = std::next(it) == groups.end();
    if (f_member)
      for (const auto& tau : se.shapes())
        if (tau.first() < need) res.fail("image group " + key_string(it->first) + " leaves the ideal");
    if (!top) continue;
    for (const auto& [ref, c] : se.det_terms) {
      Tableau L = canonical_side ? canonical(ref.shape(), amb.n) : anti_canonical(ref.shape(), amb.n);
      bool ok = ref.bt.S == L;
      if (with_xi)
        ok = ok && ref.bt.T == (canonical_side ? canonical(ref.shape(), amb.m) : anti_canonical(ref.shape(), amb.m));
      if (!ok) res.fail("top group contains " + ref.bt.S.to_string() + "|" + ref.bt.T.to_string());
    }
    for (const auto& [ref, c] : se.pf_terms) {
      Tableau L = canonical_side ? canonical(ref.shape(), amb.n) : anti_canonical(ref.shape(), amb.n);
      if (ref.tab != L) res.fail("top group contains " + ref.tab.to_string());
    }
  }
  return res;
}

}  // namespace idealred
