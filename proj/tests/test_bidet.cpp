#include <random>
#include <set>

#include "doctest.h"
#include "idealred/bidet.hpp"

using namespace idealred;

namespace {

using Poly = SparsePolynomial;
using Rows = std::vector<std::vector<unsigned>>;

Poly var(const PrimeField& f, VariableId v) { return Poly::variable(f, v); }

FpMatrix random_matrix(const PrimeField& f, std::mt19937_64& rng, unsigned r, unsigned c) {
  FpMatrix m(r, c);
  for (auto& v : m.a) v = rng() % f.p();
  return m;
}

FpMatrix random_skew(const PrimeField& f, std::mt19937_64& rng, unsigned n) {
  FpMatrix m(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) {
      m(i, j) = rng() % f.p();
      m(j, i) = f.neg(m(i, j));
    }
  return m;
}

std::unordered_map<VariableId, u64> as_point(const FpMatrix& x) {
  std::unordered_map<VariableId, u64> pt;
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned j = 0; j < x.cols; ++j) pt[VariableId::x(i + 1, j + 1)] = x(i, j);
  return pt;
}

std::unordered_map<VariableId, u64> as_skew_point(const FpMatrix& x) {
  std::unordered_map<VariableId, u64> pt;
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned j = i + 1; j < x.cols; ++j) pt[VariableId::x(i + 1, j + 1)] = x(i, j);
  return pt;
}

std::vector<BideterminantRef> standard_refs(unsigned maxsize, unsigned n, unsigned m) {
  std::vector<BideterminantRef> out;
  for (unsigned d = 1; d <= maxsize; ++d)
    for (const auto& sigma : enumerate_partitions(d, std::min(n, m)))
      for (const auto& S : enumerate_css(sigma, n))
        for (const auto& T : enumerate_css(sigma, m)) out.emplace_back(Bitableau(S, T), n, m);
  return out;
}

std::vector<BipfaffianRef> standard_prefs(unsigned maxsize, unsigned two_n) {
  std::vector<BipfaffianRef> out;
  for (unsigned d = 2; d <= maxsize; d += 2)
    for (const auto& sigma : enumerate_partitions(d, two_n, true))
      for (const auto& S : enumerate_css(sigma, two_n)) out.emplace_back(S, two_n);
  return out;
}

}  // namespace

TEST_CASE("bideterminant expansion") {
  PrimeField f;
  auto x = [&](unsigned i, unsigned j) { return var(f, VariableId::x(i, j)); };
  BideterminantRef minor(Bitableau(Tableau{{1, 2}}, Tableau{{1, 2}}), 2, 2);
  CHECK(expand_bideterminant(f, minor) == x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1));
  // Single column: a monomial.
  BideterminantRef col(Bitableau(Tableau{{1}, {2}, {2}}, Tableau{{3}, {1}, {1}}), 2, 3);
  CHECK(expand_bideterminant(f, col) == x(1, 3) * x(2, 1) * x(2, 1));
  BideterminantRef r21(Bitableau(Tableau{{1, 2}, {1}}, Tableau{{1, 2}, {2}}), 2, 2);
  FpMatrix pt(2, 2);
  pt.a = {1, 2, 3, 4};
  CHECK(eval_bideterminant(f, r21, pt) == f.from_int(-4));
  CHECK(expand_bideterminant(f, r21).eval(as_point(pt)) == f.from_int(-4));
  CHECK_THROWS_AS(BideterminantRef(Bitableau(Tableau{{2, 1}}, Tableau{{1, 2}}), 2, 2), InvalidArgument);
  CHECK_THROWS_AS(BideterminantRef(Bitableau(Tableau{{3}}, Tableau{{1}}), 2, 2), InvalidArgument);
}

TEST_CASE("bipfaffian expansion") {
  PrimeField f;
  auto x = [&](unsigned i, unsigned j) { return var(f, VariableId::x(i, j)); };
  CHECK(expand_bipfaffian(f, BipfaffianRef(Tableau{{1, 2}}, 4)) == x(1, 2));
  CHECK(expand_bipfaffian(f, BipfaffianRef(Tableau{{1, 3}, {2, 4}}, 4)) == x(1, 3) * x(2, 4));
  CHECK(expand_bipfaffian(f, BipfaffianRef(Tableau{{1, 2, 3, 4}}, 4)) ==
        x(1, 2) * x(3, 4) - x(1, 3) * x(2, 4) + x(1, 4) * x(2, 3));
  CHECK_THROWS_AS(BipfaffianRef(Tableau{{1, 2, 3}}, 4), InvalidArgument);
}

TEST_CASE("numeric evaluation matches symbolic expansion") {
  PrimeField f;
  std::mt19937_64 rng(7);
  std::vector<BideterminantRef> refs = {
      BideterminantRef(Bitableau(Tableau{{1, 2, 3}}, Tableau{{1, 2, 3}}), 3, 3),
      BideterminantRef(Bitableau(Tableau{{1, 3}, {2}}, Tableau{{2, 3}, {3}}), 3, 3),
      BideterminantRef(Bitableau(Tableau{{2}, {2}, {3}}, Tableau{{1}, {1}, {2}}), 3, 2),
      BideterminantRef(Bitableau(Tableau{{1, 2}, {1, 2}}, Tableau{{1, 3}, {2, 3}}), 2, 3)};
  for (const auto& ref : refs) {
    auto poly = expand_bideterminant(f, ref);
    CHECK(poly.is_homogeneous());
    CHECK(poly.total_degree().value() == ref.shape().size());
    for (int it = 0; it < 50; ++it) {
      auto x = random_matrix(f, rng, ref.n, ref.m);
      CHECK(eval_bideterminant(f, ref, x) == poly.eval(as_point(x)));
    }
  }
  std::vector<BipfaffianRef> prefs = {BipfaffianRef(Tableau{{1, 2, 3, 4}, {2, 5}}, 6),
                                      BipfaffianRef(Tableau{{1, 2, 3, 4, 5, 6}}, 6),
                                      BipfaffianRef(Tableau{{3, 4}, {3, 4}}, 4)};
  for (const auto& ref : prefs) {
    auto poly = expand_bipfaffian(f, ref);
    CHECK(poly.total_degree().value() * 2 == ref.shape().size());
    for (int it = 0; it < 50; ++it) {
      auto x = random_skew(f, rng, ref.two_n);
      CHECK(eval_bipfaffian(f, ref, x) == poly.eval(as_skew_point(x)));
    }
  }
  BideterminantRef full(Bitableau(Tableau{{1, 2, 3}}, Tableau{{1, 2, 3}}), 3, 3);
  CHECK(eval_bideterminant(f, full, FpMatrix::identity(3)) == 1);
  auto eq = random_matrix(f, rng, 3, 3);
  for (unsigned j = 0; j < 3; ++j) eq(1, j) = eq(0, j);
  CHECK(eval_bideterminant(f, full, eq) == 0);
  CHECK_THROWS_AS(eval_bideterminant(f, full, FpMatrix::identity(2)), InvalidArgument);
}

TEST_CASE("multidegrees") {
  PrimeField f;
  Partition s({2, 1});
  BideterminantRef kk(Bitableau(canonical(s, 2), canonical(s, 2)), 2, 2);
  auto md = bideterminant_multidegree(kk);
  CHECK(md.s == std::vector<unsigned>{2, 1});
  CHECK(md.t == std::vector<unsigned>{2, 1});
  // Canonical multidegrees separate shapes.
  std::set<MultiDegree> seen;
  std::set<MultiDegree> seen_pf;
  unsigned count = 0, count_pf = 0;
  for (unsigned d = 1; d <= 5; ++d)
    for (const auto& sigma : enumerate_partitions(d, 5)) {
      seen.insert(bideterminant_multidegree(BideterminantRef(Bitableau(canonical(sigma, 5), canonical(sigma, 5)), 5, 5)));
      ++count;
    }
  for (unsigned d = 2; d <= 10; d += 2)
    for (const auto& sigma : enumerate_partitions(d, 10, true)) {
      seen_pf.insert(bipfaffian_multidegree(BipfaffianRef(canonical(sigma, 10), 10)));
      ++count_pf;
    }
  CHECK(seen.size() == count);
  CHECK(seen_pf.size() == count_pf);
  // Agreement with the measured multidegree of the expansion.
  for (const auto& ref : standard_refs(3, 3, 2)) {
    auto measured = multidegree(expand_bideterminant(f, ref), 3, 2);
    REQUIRE(measured);
    CHECK(*measured == bideterminant_multidegree(ref));
  }
  for (const auto& ref : standard_prefs(4, 4)) {
    auto measured = multidegree_pfaff(expand_bipfaffian(f, ref), 4);
    REQUIRE(measured);
    CHECK(*measured == bipfaffian_multidegree(ref));
  }
}

TEST_CASE("diagonal actions") {
  PrimeField f;
  unsigned n = 3, m = 2;
  auto X = PolyMatrix::generic(f, n, m);
  PolyMatrix D(f, n, n), Dp(f, m, m);
  for (unsigned i = 0; i < n; ++i) D.at(i, i) = var(f, VariableId::y(i + 1));
  for (unsigned j = 0; j < m; ++j) Dp.at(j, j) = var(f, VariableId::z(j + 1));
  auto Dt = scaled_diag(f, n, Family::Y, VariableId::v());
  auto Dtp = scaled_diag(f, m, Family::Z, VariableId::v());
  auto plain = D * X * Dp;
  auto scaled = Dt * X * Dtp;
  auto subst_of = [&](const PolyMatrix& img) {
    std::map<VariableId, Poly> map;
    for (unsigned i = 0; i < img.rows(); ++i)
      for (unsigned j = 0; j < img.cols(); ++j) map.emplace(VariableId::x(i + 1, j + 1), img.at(i, j));
    return map;
  };
  auto plain_map = subst_of(plain), scaled_map = subst_of(scaled);
  for (const auto& ref : standard_refs(2, n, m)) {
    auto base = expand_bideterminant(f, ref);
    auto md = bideterminant_multidegree(ref);
    std::vector<Monomial::Entry> ys;
    for (unsigned i = 0; i < n; ++i) ys.emplace_back(VariableId::y(i + 1), md.s[i]);
    for (unsigned j = 0; j < m; ++j) ys.emplace_back(VariableId::z(j + 1), md.t[j]);
    Poly factor = Poly::term(f, Monomial(ys), 1);
    CHECK(base.substitute(plain_map) == factor * base);
    Poly vpow = var(f, VariableId::v()).pow(ref.bt.S.entry_sum() + ref.bt.T.entry_sum());
    CHECK(base.substitute(scaled_map) == factor * vpow * base);
  }
  // Pfaffian analogue: D X D and the scaled diagonal on both sides.
  unsigned tn = 4;
  auto S = PolyMatrix::generic_skew(f, tn);
  PolyMatrix Dy(f, tn, tn);
  for (unsigned i = 0; i < tn; ++i) Dy.at(i, i) = var(f, VariableId::y(i + 1));
  auto Ds = scaled_diag(f, tn, Family::Y, VariableId::v());
  auto skew_map = [&](const PolyMatrix& img) {
    std::map<VariableId, Poly> map;
    for (unsigned i = 0; i < tn; ++i)
      for (unsigned j = i + 1; j < tn; ++j) map.emplace(VariableId::x(i + 1, j + 1), img.at(i, j));
    return map;
  };
  auto pm = skew_map(Dy * S * Dy), sm = skew_map(Ds * S * Ds);
  for (const auto& ref : standard_prefs(4, tn)) {
    auto base = expand_bipfaffian(f, ref);
    auto md = bipfaffian_multidegree(ref);
    std::vector<Monomial::Entry> ys;
    for (unsigned i = 0; i < tn; ++i) ys.emplace_back(VariableId::y(i + 1), md.s[i]);
    Poly factor = Poly::term(f, Monomial(ys), 1);
    CHECK(base.substitute(pm) == factor * base);
    CHECK(base.substitute(sm) == factor * var(f, VariableId::v()).pow(ref.tab.entry_sum()) * base);
  }
}

TEST_CASE("elementary expansion identities") {
  PrimeField f;
  std::mt19937_64 rng(13);
  // No i in S: the h = 0 branch only.
  BideterminantRef noi(Bitableau(Tableau{{2, 3}}, Tableau{{1, 2}}), 3, 3);
  auto x = random_matrix(f, rng, 3, 3);
  CHECK(eij_expansion_check(f, noi, 1, 2, EijSide::Left, 5, x));
  CHECK(eval_bideterminant(f, noi, x) == eval_bideterminant(f, noi, mul(f, [&] {
          FpMatrix e = FpMatrix::identity(3);
          e(0, 1) = 5;
          return e;
        }(), x)));
  // Row containing both i and j is unchanged.
  BideterminantRef both(Bitableau(Tableau{{1, 2}}, Tableau{{1, 3}}), 3, 3);
  CHECK(eij_expansion_check(f, both, 1, 2, EijSide::Left, 9, x));
  // Exhaustive small refs, all index pairs, random points.
  for (const auto& ref : standard_refs(3, 3, 3))
    for (unsigned i = 1; i <= 3; ++i)
      for (unsigned j = 1; j <= 3; ++j) {
        if (i == j) continue;
        for (int it = 0; it < 3; ++it) {
          auto pt = random_matrix(f, rng, 3, 3);
          u64 lam = rng() % f.p();
          CHECK(eij_expansion_check(f, ref, i, j, EijSide::Left, lam, pt));
          CHECK(eij_expansion_check(f, ref, i, j, EijSide::Right, lam, pt));
        }
      }
  for (const auto& ref : standard_prefs(4, 4))
    for (unsigned i = 1; i <= 4; ++i)
      for (unsigned j = 1; j <= 4; ++j) {
        if (i == j) continue;
        auto pt = random_skew(f, rng, 4);
        CHECK(eij_expansion_check(f, ref, i, j, rng() % f.p(), pt));
      }
}
