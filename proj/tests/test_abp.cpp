#include <functional>
#include <random>

#include "doctest.h"
#include "idealred/abp.hpp"
#include "idealred/errors.hpp"
#include "support.hpp"

using namespace idealred;
using namespace testsupport;

namespace {

using Point = std::unordered_map<VariableId, u64>;

AffineForm var(VariableId v, u64 c = 1) { return AffineForm{0, {{v, c}}}; }

Point random_point(const PrimeField& f, std::mt19937_64& rng, const std::vector<VariableId>& vars) {
  Point pt;
  for (auto v : vars) pt[v] = rng() % f.p();
  return pt;
}

// Sums edge-label products over explicitly enumerated source-sink paths.
u64 path_sum(const ABP& a, const Point& pt) {
  const PrimeField& f = a.field();
  u64 total = 0;
  std::function<void(unsigned, unsigned, u64)> walk = [&](unsigned layer, unsigned node, u64 acc) {
    if (layer + 1 == a.layer_sizes().size()) {
      total = f.add(total, acc);
      return;
    }
    for (const auto& e : a.edges())
      if (e.layer == layer + 1 && e.from == node) walk(layer + 1, e.to, f.mul(acc, e.label.eval(f, pt)));
  };
  walk(0, 0, 1);
  return total;
}

ABP random_abp(const PrimeField& f, std::mt19937_64& rng, unsigned layers, unsigned width) {
  std::vector<unsigned> sizes(layers + 1);
  for (auto& s : sizes) s = 1 + rng() % width;
  sizes.front() = sizes.back() = 1;
  std::vector<AbpEdge> edges;
  for (unsigned l = 1; l <= layers; ++l)
    for (unsigned a = 0; a < sizes[l - 1]; ++a)
      for (unsigned b = 0; b < sizes[l]; ++b) {
        if (rng() % 3 == 0) continue;
        AffineForm form{rng() % 3 ? rng() % f.p() : 0, {}};
        for (unsigned k = 1; k <= 3; ++k)
          if (rng() % 2) form.terms.emplace_back(VariableId::u(k), rng() % f.p());
        edges.push_back({l, a, b, form});
      }
  return ABP(f, sizes, edges);
}

std::vector<VariableId> u_vars(unsigned n) {
  std::vector<VariableId> out;
  for (unsigned i = 1; i <= n; ++i) out.push_back(VariableId::u(i));
  return out;
}

std::vector<VariableId> u_matrix_vars(unsigned t) {
  std::vector<VariableId> out;
  for (unsigned i = 1; i <= t; ++i)
    for (unsigned j = 1; j <= t; ++j) out.push_back(VariableId::u(i, j));
  return out;
}

PolyMatrix u_matrix(const PrimeField& f, unsigned t) {
  PolyMatrix m(f, t, t);
  for (unsigned i = 0; i < t; ++i)
    for (unsigned j = 0; j < t; ++j) m.at(i, j) = SparsePolynomial::variable(f, VariableId::u(i + 1, j + 1));
  return m;
}

PolyMatrix u_skew(const PrimeField& f, unsigned t) {
  PolyMatrix m(f, t, t);
  for (unsigned i = 0; i < t; ++i)
    for (unsigned j = i + 1; j < t; ++j) {
      m.at(i, j) = SparsePolynomial::variable(f, VariableId::u(i + 1, j + 1));
      m.at(j, i) = -m.at(i, j);
    }
  return m;
}

// Both clauses of the embedding contract, symbolically.
void check_valiant(const ABP& a, unsigned r) {
  const PrimeField& f = a.field();
  PolyMatrix A = valiant_embed(a, r).to_poly(f);
  SparsePolynomial g = a.to_polynomial();
  CHECK(sym_det(A) == SparsePolynomial::constant(f, 1) + g);
  for (unsigned k = 1; k < r; ++k) CHECK(sym_det(A.submatrix(k, k)) == SparsePolynomial::constant(f, 1));
}

}  // namespace

TEST_CASE("elementary ABPs") {
  PrimeField f;
  ABP one(f, {1, 1}, {{1, 0, 0, var(VariableId::u(1))}});
  CHECK(one.eval({{VariableId::u(1), 9}}) == 9);
  ABP two(f, {1, 1}, {{1, 0, 0, var(VariableId::u(1))}, {1, 0, 0, var(VariableId::u(2))}});
  CHECK(two.eval({{VariableId::u(1), 9}, {VariableId::u(2), 4}}) == 13);
  CHECK_THROWS_AS(one.eval({}), InvalidArgument);
  CHECK_THROWS_AS(ABP(f, {2, 1}, {}), InvalidArgument);
  CHECK_THROWS_AS(ABP(f, {1, 1}, {{1, 0, 1, var(VariableId::u(1))}}), InvalidArgument);
}

TEST_CASE("layered evaluation agrees with path enumeration") {
  PrimeField f;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_abp(f, rng, 1 + rng() % 4, 4);
    auto pt = random_point(f, rng, u_vars(3));
    CHECK(a.eval(pt) == path_sum(a, pt));
    CHECK(a.to_polynomial().eval(pt) == a.eval(pt));
  }
}

TEST_CASE("homogenization") {
  PrimeField f;
  std::mt19937_64 rng(4);
  VariableId z = VariableId::hom();
  ABP c(f, {1, 1}, {{1, 0, 0, AffineForm{1, {}}}});
  auto hc = homogenize_abp(c, z);
  CHECK(hc.edges()[0].label.constant == 0);
  CHECK(hc.edges()[0].label.terms == std::vector<std::pair<VariableId, u64>>{{z, 1}});
  ABP y(f, {1, 1}, {{1, 0, 0, var(VariableId::u(1))}});
  CHECK(homogenize_abp(y, z).edges()[0].label.terms == y.edges()[0].label.terms);
  CHECK_THROWS_AS(homogenize_abp(homogenize_abp(c, z), z), InvalidArgument);

  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_abp(f, rng, 3, 3);
    auto h = homogenize_abp(a, z);
    CHECK(h.vertex_count() == a.vertex_count());
    auto ghat = h.to_polynomial();
    if (!ghat.is_zero()) {
      CHECK(ghat.is_homogeneous());
      CHECK(ghat.total_degree().value() == 3);
    }
    auto pt = random_point(f, rng, u_vars(3));
    pt[z] = 1;
    CHECK(h.eval(pt) == a.eval(pt));
    u64 s = rng() % f.p();
    auto scaled = pt;
    for (auto& [v, val] : scaled) val = f.mul(val, s);
    CHECK(h.eval(scaled) == f.mul(f.pow(s, 3), h.eval(pt)));
  }
}

TEST_CASE("Valiant embedding contract") {
  PrimeField f;
  std::mt19937_64 rng(6);
  ABP y(f, {1, 1}, {{1, 0, 0, var(VariableId::u(1))}});
  check_valiant(y, 3);
  auto A = valiant_embed(y, 3).to_poly(f);
  CHECK(sym_det(A) == SparsePolynomial::constant(f, 1) + SparsePolynomial::variable(f, VariableId::u(1)));
  ABP none(f, {1, 1, 1}, {});
  CHECK(sym_det(valiant_embed(none, 3).to_poly(f)) == SparsePolynomial::constant(f, 1));
  CHECK_THROWS_AS(valiant_embed(none, 2), InvalidArgument);

  check_valiant(mv_det_abp(f, 2), 8);
  check_valiant(mv_det_abp(f, 2), mv_det_abp(f, 2).vertex_count());
  check_valiant(imm_abp(f, 2, 2), 6);
  check_valiant(pfaff_abp(f, 4), 5);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_abp(f, rng, 1 + rng() % 3, 2);
    check_valiant(a, a.vertex_count() + rng() % 2);
  }
}

TEST_CASE("extension to the ambient matrix") {
  PrimeField f;
  auto a = mv_det_abp(f, 2);
  unsigned r = a.vertex_count();
  auto A = valiant_embed(a, r);
  auto same = extend_to_ambient(A, r, r).to_poly(f);
  CHECK(same == A.to_poly(f));
  auto big = extend_to_ambient(A, r + 2, r + 1).to_poly(f);
  CHECK(big.rows() == r + 2);
  CHECK(big.cols() == r + 1);
  auto one_plus_g = SparsePolynomial::constant(f, 1) + a.to_polynomial();
  for (unsigned k = 1; k <= r + 1; ++k)
    CHECK(sym_det(big.submatrix(k, k)) == (k >= r ? one_plus_g : SparsePolynomial::constant(f, 1)));
  CHECK(extend_to_ambient(PolyMatrix::identity(f, 2), 3, 3) == PolyMatrix::identity(f, 3));
  CHECK_THROWS_AS(extend_to_ambient(A, r - 1, r), InvalidArgument);
}

TEST_CASE("clow-sequence determinant ABP") {
  PrimeField f;
  std::mt19937_64 rng(8);
  CHECK(mv_det_abp(f, 1).to_polynomial() == SparsePolynomial::variable(f, VariableId::u(1, 1)));
  auto a2 = mv_det_abp(f, 2);
  CHECK(a2.eval({{VariableId::u(1, 1), 1}, {VariableId::u(1, 2), 2}, {VariableId::u(2, 1), 3}, {VariableId::u(2, 2), 4}}) ==
        f.p() - 2);
  CHECK(a2.vertex_count() == 4);
  for (unsigned t = 1; t <= 4; ++t) {
    auto a = mv_det_abp(f, t);
    auto d = sym_det(u_matrix(f, t));
    if (t <= 3) CHECK(a.to_polynomial() == d);
    for (int k = 0; k < 20; ++k) {
      auto pt = random_point(f, rng, u_matrix_vars(t));
      CHECK(a.eval(pt) == d.eval(pt));
    }
    MESSAGE("mv_det_abp(", t, ") vertices: ", a.vertex_count());
  }
}

TEST_CASE("iterated matrix multiplication ABP") {
  PrimeField f;
  std::mt19937_64 rng(10);
  CHECK(imm_abp(f, 1, 1).to_polynomial() == SparsePolynomial::variable(f, VariableId::u(1, 1, 1)));
  CHECK(imm_abp(f, 1, 3).to_polynomial() == SparsePolynomial::variable(f, VariableId::u(1, 1, 1)));
  for (unsigned len = 1; len <= 4; ++len)
    for (unsigned dim = 1; dim <= 3; ++dim) {
      auto a = imm_abp(f, len, dim);
      CHECK(a.vertex_count() == (len - 1) * dim + 2);
      if (len == dim) CHECK(a.vertex_count() == len * (dim - 1) + 2);
      // Direct product of random matrices.
      Point pt;
      FpMatrix prod = FpMatrix::identity(dim);
      for (unsigned k = 1; k <= len; ++k) {
        FpMatrix y = random_matrix(f, rng, dim, dim);
        for (unsigned i = 0; i < dim; ++i)
          for (unsigned j = 0; j < dim; ++j) pt[VariableId::u(k, i + 1, j + 1)] = y(i, j);
        prod = mul(f, prod, y);
      }
      CHECK(a.eval(pt) == prod(0, 0));
    }
}

TEST_CASE("matching ABP for the Pfaffian") {
  PrimeField f;
  std::mt19937_64 rng(12);
  CHECK(pfaff_abp(f, 2).to_polynomial() == SparsePolynomial::variable(f, VariableId::u(1, 2)));
  auto p4 = pfaff_abp(f, 4).to_polynomial();
  auto u = [&](unsigned i, unsigned j) { return SparsePolynomial::variable(f, VariableId::u(i, j)); };
  CHECK(p4 == u(1, 2) * u(3, 4) - u(1, 3) * u(2, 4) + u(1, 4) * u(2, 3));
  for (unsigned t = 2; t <= 6; t += 2) {
    auto a = pfaff_abp(f, t);
    CHECK(a.to_polynomial() == sym_pfaff(u_skew(f, t)));
    auto det = sym_det(u_skew(f, t));
    for (int k = 0; k < 10; ++k) {
      Point pt;
      for (unsigned i = 1; i <= t; ++i)
        for (unsigned j = i + 1; j <= t; ++j) pt[VariableId::u(i, j)] = rng() % f.p();
      u64 v = a.eval(pt);
      CHECK(f.mul(v, v) == det.eval(pt));
    }
    MESSAGE("pfaff_abp(", t, ") vertices: ", a.vertex_count());
  }
  CHECK(pfaff_abp(f, 2).vertex_count() == 2);
  CHECK(pfaff_abp(f, 4).vertex_count() == 5);
  CHECK(pfaff_abp(f, 6).vertex_count() == 13);
  CHECK_THROWS_AS(pfaff_abp(f, 8), CapExceeded);
  CHECK_THROWS_AS(pfaff_abp(f, 3), InvalidArgument);
}

TEST_CASE("skew-symmetrization contract") {
  PrimeField f;
  std::mt19937_64 rng(14);
  SparsePolynomial a = SparsePolynomial::variable(f, VariableId::u(1, 1));
  PolyMatrix one(f, 1, 1);
  one.at(0, 0) = a;
  auto e1 = skew_symmetrize(one);
  CHECK(e1.matrix.is_skew_symmetric());
  CHECK(sym_pfaff(e1.matrix) == a.scale(e1.sign[0] > 0 ? 1 : f.neg(1)));

  for (unsigned n = 1; n <= 3; ++n) {
    auto e = skew_symmetrize(u_matrix(f, n));
    REQUIRE(e.sign.size() == n);
    CHECK(e.matrix.is_skew_symmetric());
    for (unsigned k = 1; k <= n; ++k) {
      auto det = sym_det(u_matrix(f, n).submatrix(k, k));
      CHECK(sym_pfaff(e.matrix.submatrix(2 * k, 2 * k)) == (e.sign[k - 1] > 0 ? det : -det));
    }
  }
  // Numeric n = 2 and the affine variant.
  for (int trial = 0; trial < 10; ++trial) {
    AffineMatrix A(2, 2);
    for (auto& form : A.e) form = AffineForm{rng() % f.p(), {{VariableId::u(1), rng() % f.p()}}};
    auto e = skew_symmetrize(f, A);
    Point pt{{VariableId::u(1), rng() % f.p()}};
    FpMatrix M = e.matrix.eval(f, pt), An = A.eval(f, pt);
    CHECK(is_skew(f, M));
    for (unsigned k = 1; k <= 2; ++k) {
      std::vector<unsigned> i2(2 * k), i1(k);
      for (unsigned i = 0; i < 2 * k; ++i) i2[i] = i;
      for (unsigned i = 0; i < k; ++i) i1[i] = i;
      u64 d = det(f, submatrix(An, i1, i1));
      CHECK(pfaff(f, submatrix(M, i2, i2)) == (e.sign[k - 1] > 0 ? d : f.neg(d)));
    }
  }
  CHECK_THROWS_AS(skew_symmetrize(PolyMatrix(f, 2, 3)), InvalidArgument);
}
