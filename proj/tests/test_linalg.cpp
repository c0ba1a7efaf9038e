#include <algorithm>
#include <random>

#include "doctest.h"
#include "idealred/linalg.hpp"
#include "idealred/tableau.hpp"

using namespace idealred;

namespace {

using Poly = SparsePolynomial;

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

// Leibniz formula over all permutations, independent of the elimination code.
u64 leibniz(const PrimeField& f, const FpMatrix& m) {
  std::vector<unsigned> perm(m.rows);
  for (unsigned i = 0; i < m.rows; ++i) perm[i] = i;
  u64 total = 0;
  do {
    int sign = 1;
    for (unsigned a = 0; a < perm.size(); ++a)
      for (unsigned b = a + 1; b < perm.size(); ++b)
        if (perm[a] > perm[b]) sign = -sign;
    u64 t = 1;
    for (unsigned i = 0; i < m.rows; ++i) t = f.mul(t, m(i, perm[i]));
    total = sign > 0 ? f.add(total, t) : f.sub(total, t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::unordered_map<VariableId, u64> random_point(const PrimeField& f, std::mt19937_64& rng,
                                                 const std::vector<VariableId>& vars) {
  std::unordered_map<VariableId, u64> pt;
  for (auto v : vars) pt[v] = rng() % f.p();
  return pt;
}

}  // namespace

TEST_CASE("elementary matrices") {
  PrimeField f;
  auto lam = var(f, VariableId::lambda(1, 2));
  auto X = PolyMatrix::generic(f, 2, 2);
  auto E = elementary(f, 2, 1, 2, lam);
  auto EX = E * X;
  CHECK(EX.at(0, 0) == X.at(0, 0) + lam * X.at(1, 0));
  CHECK(EX.at(0, 1) == X.at(0, 1) + lam * X.at(1, 1));
  CHECK(EX.at(1, 0) == X.at(1, 0));
  CHECK(sym_det(elementary(f, 3, 3, 1, lam)) == Poly::constant(f, 1));
  CHECK(elementary(f, 3, 1, 2, Poly(f)) == PolyMatrix::identity(f, 3));
  CHECK_THROWS_AS(elementary(f, 3, 2, 2, lam), InvalidArgument);
}

TEST_CASE("M and N factored forms") {
  PrimeField f;
  auto M2 = build_M_det(f, 2).expand();
  CHECK(M2.at(0, 0) == Poly::constant(f, 1));
  CHECK(M2.at(0, 1) == var(f, VariableId::lambda(1, 2)));
  CHECK(M2.at(1, 0).is_zero());
  for (unsigned n = 1; n <= 4; ++n) {
    CHECK(sym_det(build_M_det(f, n).expand()) == Poly::constant(f, 1));
    CHECK(sym_det(build_N_det(f, n).expand()) == Poly::constant(f, 1));
  }
  // Zero substitution gives the identity.
  auto M4 = build_M_det(f, 4);
  auto zero = M4.eval([](VariableId) { return u64{0}; });
  CHECK(zero == FpMatrix::identity(4));
  // Factored numeric evaluation agrees with the expanded product.
  std::mt19937_64 rng(1);
  for (unsigned n : {2u, 3u, 4u}) {
    for (auto fm : {build_M_det(f, n), build_N_det(f, n)}) {
      auto expanded = fm.expand();
      std::unordered_map<VariableId, u64> pt;
      for (const auto& fac : fm.factors()) pt[fac.var] = rng() % f.p();
      CHECK(fm.eval([&](VariableId v) { return pt.at(v); }) == expanded.eval(pt));
    }
  }
  // N is the transpose of the M-shaped product over the Xi family.
  auto N3 = build_N_det(f, 3).expand();
  std::map<VariableId, Poly> rename;
  for (const auto& [i, j] : ordered_pairs(3)) rename.emplace(VariableId::lambda(i, j), var(f, VariableId::xi(i, j)));
  CHECK(N3 == build_M_det(f, 3).expand().substitute(rename).transpose());

  auto Mp = build_M_pfaff(f, 2).expand();
  CHECK(Mp.at(0, 1) == var(f, VariableId::lambda(1, 2)));
  CHECK(sym_det(build_M_pfaff(f, 4).expand()) == Poly::constant(f, 1));
  // M X M^T stays skew at random lambda values.
  auto M6 = build_M_pfaff(f, 6);
  for (int it = 0; it < 5; ++it) {
    auto Mv = M6.eval([&](VariableId) { return rng() % f.p(); });
    auto Xv = random_skew(f, rng, 6);
    CHECK(is_skew(f, mul(f, mul(f, Mv, Xv), Mv.transpose())));
  }
}

TEST_CASE("anti-diagonal and scaled diagonal") {
  PrimeField f;
  auto J = anti_diagonal(f, 2);
  auto X = PolyMatrix::generic(f, 2, 2);
  auto JXJ = J * X * J;
  CHECK(JXJ.at(0, 0) == X.at(1, 1));
  CHECK(JXJ.at(0, 1) == X.at(1, 0));
  for (unsigned k = 1; k <= 6; ++k) {
    long long expect = ((k * (k - 1) / 2) % 2) ? -1 : 1;
    CHECK(sym_det(anti_diagonal(f, k)) == Poly::constant(f, f.from_int(expect)));
  }
  auto D = scaled_diag(f, 3, Family::Y, VariableId::v());
  std::unordered_map<VariableId, u64> ones = {{VariableId::y(1), 1}, {VariableId::y(2), 1}, {VariableId::y(3), 1},
                                              {VariableId::v(), 1}};
  CHECK(D.eval(ones) == FpMatrix::identity(3));
  CHECK(D.at(2, 2) == Poly::term(f, Monomial({{VariableId::y(3), 1}, {VariableId::v(), 3}}), 1));
}

TEST_CASE("symbolic determinant and Pfaffian") {
  PrimeField f;
  PolyMatrix ab(f, 2, 2);
  auto a = var(f, VariableId::u(1)), b = var(f, VariableId::u(2)), c = var(f, VariableId::u(3)),
       d = var(f, VariableId::u(4));
  ab.at(0, 0) = a;
  ab.at(0, 1) = b;
  ab.at(1, 0) = c;
  ab.at(1, 1) = d;
  CHECK(sym_det(ab) == a * d - b * c);
  CHECK(sym_pfaff(PolyMatrix::generic_skew(f, 2)) == var(f, VariableId::x(1, 2)));
  auto x = [&](unsigned i, unsigned j) { return var(f, VariableId::x(i, j)); };
  auto pf4 = sym_pfaff(PolyMatrix::generic_skew(f, 4));
  CHECK(pf4 == x(1, 2) * x(3, 4) - x(1, 3) * x(2, 4) + x(1, 4) * x(2, 3));
  for (unsigned n : {2u, 4u, 6u}) {
    auto S = PolyMatrix::generic_skew(f, n);
    auto pf = sym_pfaff(S);
    CHECK(pf * pf == sym_det(S));
  }
  CHECK_THROWS_AS(sym_det(PolyMatrix(f, 2, 3)), InvalidArgument);
  CHECK_THROWS_AS(sym_pfaff(PolyMatrix::generic(f, 2, 2)), InvalidArgument);
  CHECK_THROWS_AS(sym_det(PolyMatrix::identity(f, 9)), CapExceeded);
}

TEST_CASE("numeric determinant and Pfaffian") {
  PrimeField f;
  std::mt19937_64 rng(2);
  for (unsigned n = 1; n <= 6; ++n)
    for (int it = 0; it < 5; ++it) {
      auto m = random_matrix(f, rng, n, n);
      CHECK(det(f, m) == leibniz(f, m));
    }
  FpMatrix sing(3, 3);
  sing(0, 0) = 1;
  sing(1, 0) = 2;
  CHECK(det(f, sing) == 0);
  for (unsigned n : {2u, 4u, 6u, 8u}) {
    auto S = PolyMatrix::generic_skew(f, n);
    auto spf = n <= 6 ? sym_pfaff(S) : Poly(f);
    for (int it = 0; it < 5; ++it) {
      auto m = random_skew(f, rng, n);
      u64 p = pfaff(f, m);
      CHECK(f.mul(p, p) == det(f, m));
      if (n <= 6) {
        std::unordered_map<VariableId, u64> pt;
        for (unsigned i = 0; i < n; ++i)
          for (unsigned j = i + 1; j < n; ++j) pt[VariableId::x(i + 1, j + 1)] = m(i, j);
        CHECK(p == spf.eval(pt));
      }
    }
  }
  // Zero pivots force index swaps.
  FpMatrix z(4, 4);
  z(0, 3) = 5;
  z(3, 0) = f.neg(5);
  z(1, 2) = 7;
  z(2, 1) = f.neg(7);
  CHECK(pfaff(f, z) == 35);  // x14*x23
  CHECK_THROWS_AS(pfaff(f, random_matrix(f, rng, 2, 2)), InvalidArgument);
}

TEST_CASE("Pfaffian under congruence") {
  PrimeField f;
  std::mt19937_64 rng(4);
  for (unsigned n : {2u, 4u}) {
    auto X = PolyMatrix::generic_skew(f, n);
    auto pfX = sym_pfaff(X);
    for (int it = 0; it < 5; ++it) {
      auto Ev = random_matrix(f, rng, n, n);
      PolyMatrix E(f, n, n);
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) E.at(i, j) = Poly::constant(f, Ev(i, j));
      auto lhs = sym_pfaff(E * X * E.transpose());
      CHECK(lhs == pfX.scale(det(f, Ev)));
    }
  }
}

TEST_CASE("product associativity and row/column semantics") {
  PrimeField f;
  std::mt19937_64 rng(6);
  for (int it = 0; it < 10; ++it) {
    auto A = random_matrix(f, rng, 3, 4), B = random_matrix(f, rng, 4, 2), C = random_matrix(f, rng, 2, 5);
    CHECK(mul(f, mul(f, A, B), C) == mul(f, A, mul(f, B, C)));
  }
  auto lam = var(f, VariableId::lambda(2, 3));
  auto X = PolyMatrix::generic(f, 3, 3);
  auto XE = X * elementary(f, 3, 2, 3, lam);
  for (unsigned r = 0; r < 3; ++r) CHECK(XE.at(r, 2) == X.at(r, 2) + lam * X.at(r, 1));
  std::vector<VariableId> vars;
  for (unsigned i = 1; i <= 3; ++i)
    for (unsigned j = 1; j <= 3; ++j) vars.push_back(VariableId::x(i, j));
  vars.push_back(VariableId::lambda(2, 3));
  auto pt = random_point(f, rng, vars);
  CHECK(XE.eval(pt) == mul(f, X.eval(pt), elementary(f, 3, 2, 3, lam).eval(pt)));
}
