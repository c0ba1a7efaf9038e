#include <random>

#include "doctest.h"
#include "idealred/polynomial.hpp"

using namespace idealred;

namespace {

using Poly = SparsePolynomial;

Poly var(const PrimeField& f, VariableId v) { return Poly::variable(f, v); }

Poly random_poly(const PrimeField& f, std::mt19937_64& rng, const std::vector<VariableId>& vars, unsigned terms,
                 unsigned maxexp) {
  Poly p(f);
  for (unsigned k = 0; k < terms; ++k) {
    std::vector<Monomial::Entry> e;
    for (auto v : vars) e.emplace_back(v, static_cast<std::uint32_t>(rng() % (maxexp + 1)));
    p.add_term(Monomial(e), rng() % f.p());
  }
  return p;
}

std::unordered_map<VariableId, u64> random_point(const PrimeField& f, std::mt19937_64& rng,
                                                 const std::vector<VariableId>& vars) {
  std::unordered_map<VariableId, u64> pt;
  for (auto v : vars) pt[v] = rng() % f.p();
  return pt;
}

// Independent evaluator: expands each power by repeated multiplication.
u64 naive_eval(const Poly& p, const std::unordered_map<VariableId, u64>& pt) {
  const PrimeField& f = p.field();
  u64 total = 0;
  for (const auto& [m, c] : p.sorted_terms()) {
    u64 t = c;
    for (const auto& [v, e] : m.entries())
      for (std::uint32_t k = 0; k < e; ++k) t = static_cast<u64>(static_cast<u128>(t) * pt.at(v) % f.p());
    total = (total + t) % f.p();
  }
  return total;
}

}  // namespace

TEST_CASE("variable names round-trip") {
  for (auto v : {VariableId::x(1, 2), VariableId::lambda(3, 4), VariableId::xi(1, 5), VariableId::y(2),
                 VariableId::z(7), VariableId::u(1), VariableId::u(2, 3), VariableId::u(1, 2, 3), VariableId::v(),
                 VariableId::w(), VariableId::t(), VariableId::delta(), VariableId::hom()})
    CHECK(VariableId::parse(v.name()) == v);
  CHECK(VariableId::x(1, 2).name() == "X_1_2");
  CHECK_THROWS_AS(VariableId::parse("Q_1"), InvalidArgument);
  CHECK_THROWS_AS(VariableId::parse("X_1"), InvalidArgument);
}

TEST_CASE("basic arithmetic") {
  PrimeField f7(7);
  auto x = var(f7, VariableId::x(1, 1));
  auto one = Poly::constant(f7, 1);
  auto prod = (x + one) * (x - one);
  CHECK(prod == x * x - one);
  CHECK((x * Poly(f7)).is_zero());
  CHECK(x.scale(0).is_zero());
  CHECK(Poly(f7).total_degree().is_neg_infinity());
  CHECK_THROWS_AS(Poly(f7).total_degree().value(), InvalidArgument);
  PrimeField f11(11);
  CHECK_THROWS_AS(x + var(f11, VariableId::x(1, 1)), ConfigurationError);
}

TEST_CASE("evaluation") {
  PrimeField f7(7);
  auto x = var(f7, VariableId::t());
  auto p = x * x + Poly::constant(f7, 1);
  CHECK(p.eval({{VariableId::t(), 3}}) == 3);
  CHECK(Poly(f7).eval({}) == 0);
  try {
    p.eval({});
    FAIL("expected missing-variable error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("t") != std::string::npos);
  }
  PrimeField f;
  std::mt19937_64 rng(5);
  std::vector<VariableId> vars = {VariableId::x(1, 1), VariableId::x(1, 2), VariableId::y(1), VariableId::w()};
  for (int it = 0; it < 30; ++it) {
    auto a = random_poly(f, rng, vars, 6, 3);
    auto b = random_poly(f, rng, vars, 5, 2);
    auto pt = random_point(f, rng, vars);
    CHECK(a.eval(pt) == naive_eval(a, pt));
    CHECK((a * b).eval(pt) == f.mul(a.eval(pt), b.eval(pt)));
    CHECK((a + b).eval(pt) == f.add(a.eval(pt), b.eval(pt)));
  }
}

TEST_CASE("substitution") {
  PrimeField f;
  auto w = var(f, VariableId::w());
  auto x1 = VariableId::x(1, 1), x2 = VariableId::x(1, 2);
  auto mono = var(f, x1) * var(f, x2);
  auto img = mono.substitute({{x1, w.pow(3)}, {x2, w.pow(5)}});
  CHECK(img == w.pow(8));
  CHECK(mono.substitute({}) == mono);
  auto y = VariableId::y(1);
  CHECK(var(f, y).pow(4).substitute({{y, w.pow(6)}}).degree_in(VariableId::w()).value() == 24);

  std::mt19937_64 rng(9);
  std::vector<VariableId> vars = {x1, x2, y};
  std::map<VariableId, Poly> map = {{x1, random_poly(f, rng, {VariableId::w(), y}, 3, 2)},
                                    {x2, random_poly(f, rng, {VariableId::w()}, 2, 3)}};
  for (int it = 0; it < 10; ++it) {
    auto a = random_poly(f, rng, vars, 4, 2);
    auto b = random_poly(f, rng, vars, 3, 2);
    CHECK((a * b).substitute(map) == a.substitute(map) * b.substitute(map));
    CHECK((a + b).substitute(map) == a.substitute(map) + b.substitute(map));
  }
}

TEST_CASE("coefficient extraction") {
  PrimeField f;
  auto t = VariableId::t();
  auto tp = var(f, t);
  auto p = Poly::constant(f, 1) + tp.scale(2) + tp.pow(2).scale(3);
  CHECK(p.coeff_of(t, 1) == Poly::constant(f, 2));
  CHECK(p.coeff_of(t, 5).is_zero());
  std::mt19937_64 rng(3);
  for (int it = 0; it < 10; ++it) {
    auto q = random_poly(f, rng, {t, VariableId::x(1, 1), VariableId::x(2, 2)}, 8, 4);
    Poly back(f);
    for (unsigned i = 0; i <= q.degree_in(t).value(); ++i) back += q.coeff_of(t, i) * tp.pow(i);
    CHECK(back == q);
  }
}

TEST_CASE("multidegree") {
  PrimeField f;
  auto x = [&](unsigned i, unsigned j) { return var(f, VariableId::x(i, j)); };
  auto md = multidegree(x(1, 1) * x(2, 2), 2, 2);
  REQUIRE(md);
  CHECK(md->s == std::vector<unsigned>{1, 1});
  CHECK(md->t == std::vector<unsigned>{1, 1});
  auto minor = x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1);
  auto mm = multidegree(minor, 2, 2);
  REQUIRE(mm);
  CHECK(mm->s == std::vector<unsigned>{1, 1});
  CHECK_FALSE(multidegree(x(1, 1) + x(1, 2), 2, 2));
  CHECK_THROWS_AS(multidegree(Poly(f), 2, 2), InvalidArgument);
  auto prod = multidegree(minor * x(1, 2), 2, 2);
  REQUIRE(prod);
  CHECK(*prod == *mm + *multidegree(x(1, 2), 2, 2));
  auto pf = multidegree_pfaff(x(1, 2) * x(3, 4) - x(1, 3) * x(2, 4) + x(1, 4) * x(2, 3), 4);
  REQUIRE(pf);
  CHECK(pf->s == std::vector<unsigned>{1, 1, 1, 1});
}

TEST_CASE("skew accessor") {
  PrimeField f;
  CHECK(Poly::skew_x(f, 1, 2) == var(f, VariableId::x(1, 2)));
  CHECK(Poly::skew_x(f, 2, 1) == -var(f, VariableId::x(1, 2)));
  CHECK(Poly::skew_x(f, 3, 3).is_zero());
}
