#include "idealred/interp.hpp"

#include <algorithm>

#include "idealred/errors.hpp"
#include "idealred/isolate.hpp"

namespace idealred {

namespace {

constexpr u64 kExhaustiveCheckLimit = 4096;

void check_points(const PrimeField& f, u64 first_point, u64 count) {
  // Points first..first+count-1 must be distinct residues, and count-1 < p keeps the
  // factorials in P'(alpha_j) invertible.
  if (count == 0) throw InvalidArgument("interpolation needs at least one point");
  if (first_point + count - 1 >= f.p()) throw FieldTooSmall(first_point + count, f.p());
}

// Coefficients 0..count-1 of prod_k (w - a_k), or of prod_k (1 - a_k w) when reversed.
std::vector<u64> truncated_product(const PrimeField& f, const std::vector<u64>& roots, u64 count, bool reversed) {
  std::vector<u64> c(count, 0);
  if (count == 0) return c;
  c[0] = 1;
  u64 top = 0;  // highest possibly nonzero index
  for (u64 a : roots) {
    u64 na = f.neg(a);
    u64 hi = std::min<u64>(top + 1, count - 1);
    if (reversed) {
      for (u64 k = hi; k >= 1; --k) c[k] = f.add(c[k], f.mul(na, c[k - 1]));
    } else {
      for (u64 k = hi; k >= 1; --k) c[k] = f.add(c[k - 1], f.mul(na, c[k]));
      c[0] = f.mul(na, c[0]);
    }
    top = hi;
  }
  return c;
}

std::vector<u64> factorials(const PrimeField& f, u64 n) {
  std::vector<u64> fact(n + 1, 1);
  for (u64 k = 1; k <= n; ++k) fact[k] = f.mul(fact[k - 1], k % f.p());
  return fact;
}

// 1 / P'(alpha_j) for consecutive points: P'(alpha_j) = (-1)^(D-j) j! (D-j)!.
std::vector<u64> inverse_derivatives(const PrimeField& f, u64 degree) {
  auto fact = factorials(f, degree);
  std::vector<u64> d(degree + 1);
  for (u64 j = 0; j <= degree; ++j) {
    u64 v = f.mul(fact[j], fact[degree - j]);
    d[j] = (degree - j) % 2 ? f.neg(v) : v;
  }
  return f.inv_all(d);
}

std::vector<u64> consecutive(u64 first, u64 count) {
  std::vector<u64> pts(count);
  for (u64 j = 0; j < count; ++j) pts[j] = first + j;
  return pts;
}

// Inverses of the nonzero points (0 stays 0).
std::vector<u64> point_inverses(const PrimeField& f, const std::vector<u64>& pts) {
  std::vector<u64> nz;
  for (u64 a : pts)
    if (a) nz.push_back(a);
  auto inv = f.inv_all(nz);
  std::vector<u64> out(pts.size(), 0);
  std::size_t k = 0;
  for (std::size_t j = 0; j < pts.size(); ++j)
    if (pts[j]) out[j] = inv[k++];
  return out;
}

void verify_row(const PrimeField& f, InterpolationPlan& plan) {
  const u64 n = plan.degree + 1;
  if (n <= kExhaustiveCheckLimit) {
    std::vector<u64> pw(n, 1);
    for (u64 k = 0; k <= plan.degree; ++k) {
      u64 acc = 0;
      for (u64 j = 0; j < n; ++j) {
        acc = f.add(acc, f.mul(plan.row[j], pw[j]));
        pw[j] = f.mul(pw[j], plan.points[j]);
      }
      if (acc != (k == plan.target ? 1u : 0u)) throw std::logic_error("interpolation row fails the Vandermonde check");
    }
    plan.exhaustive_check = true;
    return;
  }
  // The polynomials (w + a)^D span all of degree <= D, so a wrong row disagrees
  // with [w^i](w + a)^D = C(D, i) a^(D-i) for all but D values of a.
  auto fact = factorials(f, plan.degree);
  u64 binom = f.mul(fact[plan.degree], f.inv(f.mul(fact[plan.target], fact[plan.degree - plan.target])));
  SplitRng rng(plan.degree * 0x9e3779b97f4a7c15ULL ^ plan.target ^ (plan.first_point << 40));
  for (int round = 0; round < 2; ++round) {
    u64 a = rng.uniform(f.p() - 1);
    u64 acc = 0;
    for (u64 j = 0; j < n; ++j) acc = f.add(acc, f.mul(plan.row[j], f.pow(f.add(plan.points[j] % f.p(), a), plan.degree)));
    if (acc != f.mul(binom, f.pow(a, plan.degree - plan.target)))
      throw std::logic_error("interpolation row fails the randomized Vandermonde check");
  }
  plan.exhaustive_check = false;
}

}  // namespace

InterpolationPlan build_plan(const PrimeField& f, u64 degree, u64 target, u64 first_point) {
  if (target > degree) throw InvalidArgument("target index exceeds the degree bound");
  const u64 n = degree + 1;
  check_points(f, first_point, n);
  InterpolationPlan plan;
  plan.first_point = first_point;
  plan.degree = degree;
  plan.target = target;
  plan.points = consecutive(first_point, n);
  plan.row.assign(n, 0);
  auto inv_d = inverse_derivatives(f, degree);

  // Row entry j is [w^i] P(w)/(w - alpha_j) divided by P'(alpha_j); the quotient's
  // coefficient is reached from whichever end of P is closer.
  if (target <= degree - target) {
    auto p = truncated_product(f, plan.points, target + 2, false);
    auto inv_a = point_inverses(f, plan.points);
    for (u64 j = 0; j < n; ++j) {
      u64 q;
      if (plan.points[j] == 0) {
        q = p[target + 1];
      } else {
        q = 0;
        for (u64 k = 0; k <= target; ++k) q = f.mul(f.sub(q, p[k]), inv_a[j]);
      }
      plan.row[j] = f.mul(q, inv_d[j]);
    }
  } else {
    // top[s] = coefficient of w^(n-s) in P.
    auto top = truncated_product(f, plan.points, degree - target + 1, true);
    for (u64 j = 0; j < n; ++j) {
      u64 q = 1;
      for (u64 k = degree; k > target; --k) q = f.add(top[n - k], f.mul(plan.points[j], q));
      plan.row[j] = f.mul(q, inv_d[j]);
    }
  }
  verify_row(f, plan);
  return plan;
}

u64 apply_plan(const PrimeField& f, const InterpolationPlan& plan, const std::vector<u64>& values) {
  if (values.size() != plan.row.size()) throw InvalidArgument("one value per interpolation point");
  u64 acc = 0;
  for (std::size_t j = 0; j < values.size(); ++j) acc = f.add(acc, f.mul(plan.row[j], values[j]));
  return acc;
}

std::vector<std::vector<u64>> low_coefficients(const PrimeField& f, u64 first_point,
                                               const std::vector<std::vector<u64>>& values, u64 count) {
  if (values.empty()) return {};
  const u64 n = values.front().size();
  for (const auto& v : values)
    if (v.size() != n) throw InvalidArgument("value vectors differ in length");
  check_points(f, first_point, n);
  count = std::min(count, n);
  auto pts = consecutive(first_point, n);
  auto p = truncated_product(f, pts, count + 1, false);
  auto inv_d = inverse_derivatives(f, n - 1);
  auto inv_a = point_inverses(f, pts);
  std::vector<std::vector<u64>> out(values.size(), std::vector<u64>(count, 0));
  std::vector<u64> scale(values.size());
  for (u64 j = 0; j < n; ++j) {
    bool any = false;
    for (std::size_t v = 0; v < values.size(); ++v) {
      scale[v] = f.mul(values[v][j], inv_d[j]);
      any |= scale[v] != 0;
    }
    if (!any) continue;
    u64 q = 0;
    for (u64 k = 0; k < count; ++k) {
      q = pts[j] == 0 ? p[k + 1] : f.mul(f.sub(q, p[k]), inv_a[j]);
      for (std::size_t v = 0; v < values.size(); ++v) out[v][k] = f.add(out[v][k], f.mul(scale[v], q));
    }
  }
  return out;
}

std::optional<u64> first_nonzero_index(const PrimeField& f, u64 first_point,
                                       const std::vector<std::vector<u64>>& values) {
  if (values.empty()) return std::nullopt;
  bool any = false;
  for (const auto& v : values)
    any |= std::any_of(v.begin(), v.end(), [](u64 x) { return x != 0; });
  if (!any) return std::nullopt;
  const u64 n = values.front().size();
  u64 count = std::min<u64>(64, n);
  for (;;) {
    auto c = low_coefficients(f, first_point, values, count);
    for (u64 k = 0; k < count; ++k)
      for (const auto& row : c)
        if (row[k]) return k;
    if (count == n) return std::nullopt;
    count = std::min(2 * count, n);
  }
}

namespace {

// Copies every gate of c except (optionally) its output; returns the remap table.
std::vector<GateId> append_gates(CircuitBuilder& b, const OracleCircuit& c, bool skip_output) {
  std::vector<GateId> remap(c.gate_count(), ~0u);
  std::vector<GateId> ch;
  std::vector<u64> w;
  for (std::size_t g = 0; g < c.gate_count(); ++g) {
    GateId id = static_cast<GateId>(g);
    if (skip_output && id == c.output()) continue;
    auto [beg, end] = c.children(id);
    ch.clear();
    w.clear();
    for (const GateId* p = beg; p != end; ++p) ch.push_back(remap[*p]);
    switch (c.kind(id)) {
      case GateKind::Input:
        remap[g] = b.input(VariableId::from_code(static_cast<std::uint32_t>(c.payload(id))));
        break;
      case GateKind::Constant:
        remap[g] = b.constant(c.payload(id));
        break;
      case GateKind::Sum: {
        const std::uint32_t* wt = c.weights(id);
        for (std::size_t k = 0; k < ch.size(); ++k) w.push_back(wt[k]);
        remap[g] = b.sum(ch, w);
        break;
      }
      case GateKind::Product:
        remap[g] = b.product(ch);
        break;
      case GateKind::Oracle:
        remap[g] = b.oracle(ch);
        break;
    }
  }
  return remap;
}

}  // namespace

GateId append_circuit(CircuitBuilder& b, const OracleCircuit& c) { return append_gates(b, c, false)[c.output()]; }

OracleCircuit extract_coefficient_circuit(const PrimeField& f, const CircuitFamily& family,
                                          const InterpolationPlan& plan, bool merge_top) {
  CircuitBuilder b(f);
  std::vector<GateId> top;
  std::vector<u64> weight;
  std::unordered_map<GateId, std::size_t> slot;
  auto add = [&](GateId g, u64 w) {
    auto [it, fresh] = slot.emplace(g, top.size());
    if (fresh) {
      top.push_back(g);
      weight.push_back(w);
    } else {
      weight[it->second] = f.add(weight[it->second], w);
    }
  };
  for (std::size_t j = 0; j < plan.points.size(); ++j) {
    OracleCircuit member = family(plan.points[j]);
    if (member.field().p() != f.p()) throw ConfigurationError("family member over a different field");
    if (merge_top && member.kind(member.output()) == GateKind::Sum) {
      auto remap = append_gates(b, member, true);
      auto [beg, end] = member.children(member.output());
      const std::uint32_t* wt = member.weights(member.output());
      for (const GateId* p = beg; p != end; ++p) add(remap[*p], f.mul(plan.row[j], wt[p - beg]));
    } else {
      add(append_gates(b, member, false)[member.output()], plan.row[j]);
    }
  }
  return b.finish(b.sum(top, weight));
}

ScanResult scan_first_nonzero(const PrimeField& f, const CircuitFamily& family, u64 degree,
                              const std::vector<std::unordered_map<VariableId, u64>>& probes,
                              const OracleSpec* spec, u64 first_point) {
  if (probes.empty()) throw InvalidArgument("scan needs at least one probe point");
  check_points(f, first_point, degree + 1);
  std::vector<OracleCircuit> members;
  members.reserve(degree + 1);
  for (u64 j = 0; j <= degree; ++j) members.push_back(family(first_point + j));
  std::vector<std::vector<u64>> values(probes.size(), std::vector<u64>(degree + 1));
  for (std::size_t k = 0; k < probes.size(); ++k)
    for (u64 j = 0; j <= degree; ++j) values[k][j] = members[j].eval(spec, probes[k]);
  auto idx = first_nonzero_index(f, first_point, values);
  if (!idx) throw IsolationFailure("every coefficient vanishes at every probe point");
  ScanResult res;
  res.index = *idx;
  res.plan = build_plan(f, degree, *idx, first_point);
  res.circuit = extract_coefficient_circuit(
      f, [&](u64 alpha) { return members.at(alpha - first_point); }, res.plan);
  return res;
}

}  // namespace idealred
