#include "idealred/reduce.hpp"

#include <algorithm>
#include <map>

#include "idealred/bidet.hpp"
#include "idealred/errors.hpp"
#include "idealred/interp.hpp"

namespace idealred {

namespace {

bool is_det(const PipelineParams& p) { return p.mode == IdealMode::Det; }

// |K_sigma|: row i of the canonical tableau holds 1..sigma_i.
u64 canonical_weight(const Partition& s) {
  u64 w = 0;
  for (unsigned part : s.parts()) w += static_cast<u64>(part) * (part + 1) / 2;
  return w;
}

// Largest and smallest v-degree any nonzero member can produce after the
// substitution: entry (i, j) of the inner matrix carries v^(i+j).
u64 theoretical_v_max(const PipelineParams& p) { return is_det(p) ? u64{p.d} * (p.n + p.m) : u64{p.d} * (2 * p.n - 1); }
u64 theoretical_v_min(const PipelineParams& p) {
  return is_det(p) ? u64{p.r} * (p.r + 1) : u64{p.r} * (2 * p.r + 1);
}

FpMatrix random_matrix(const PrimeField& f, SplitRng& rng, unsigned rows, unsigned cols) {
  FpMatrix x(rows, cols);
  for (auto& v : x.a) v = rng.uniform(f.p() - 1);
  return x;
}

FpMatrix random_skew(const PrimeField& f, SplitRng& rng, unsigned n) {
  FpMatrix x(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) {
      x(i, j) = rng.uniform(f.p() - 1);
      x(j, i) = f.neg(x(i, j));
    }
  return x;
}

// Numeric left/right factors of X -> L X R (or P X P^T) and the oracle on the image.
class Substitution {
 public:
  Substitution(const PipelineParams& p, const PrimeField& f, const OracleSpec& spec)
      : p_(p), f_(f), spec_(spec), M_(build_M_det(f, p.n)), N_(build_N_det(f, p.m)), buf_(spec.arity) {
    if (spec.arity != p.oracle_inputs().size())
      throw InvalidArgument("oracle arity " + std::to_string(spec.arity) + " does not match the ambient inputs (" +
                            std::to_string(p.oracle_inputs().size()) + ")");
  }

  // L = M J diag(y_i v^i); R = diag(z_j v^j) J N.  val gives every auxiliary variable.
  template <class Val>
  void set(Val&& val, u64 v) {
    const unsigned n = p_.n, m = p_.m;
    FpMatrix M = M_.eval(val);
    L_ = FpMatrix(n, n);
    u64 vp = 1;
    for (unsigned i = 0; i < n; ++i) {
      vp = f_.mul(vp, v);
      u64 s = f_.mul(val(VariableId::y(i + 1)), vp);
      for (unsigned a = 0; a < n; ++a) L_(a, i) = f_.mul(M(a, n - 1 - i), s);
    }
    if (is_det(p_)) {
      FpMatrix N = N_.eval(val);
      R_ = FpMatrix(m, m);
      vp = 1;
      for (unsigned j = 0; j < m; ++j) {
        vp = f_.mul(vp, v);
        u64 s = f_.mul(val(VariableId::z(j + 1)), vp);
        for (unsigned b = 0; b < m; ++b) R_(j, b) = f_.mul(N(m - 1 - j, b), s);
      }
    } else {
      R_ = L_.transpose();
    }
  }

  const FpMatrix& left() const { return L_; }
  const FpMatrix& right() const { return R_; }

  FpMatrix image(const FpMatrix& x) const { return mul(f_, mul(f_, L_, x), R_); }

  // Oracle inputs read off a matrix: all entries row-major, or the upper triangle.
  void inputs_of(const FpMatrix& y, u64* out) const {
    std::size_t k = 0;
    if (is_det(p_)) {
      for (u64 v : y.a) out[k++] = v;
    } else {
      for (unsigned i = 0; i < y.rows; ++i)
        for (unsigned j = i + 1; j < y.cols; ++j) out[k++] = y(i, j);
    }
  }

  u64 eval(const FpMatrix& x) {
    inputs_of(image(x), buf_.data());
    return spec_.evaluator(buf_.data()) % f_.p();
  }
  u64 call(const u64* in) const { return spec_.evaluator(in) % f_.p(); }

 private:
  const PipelineParams& p_;
  const PrimeField& f_;
  const OracleSpec& spec_;
  FactoredMatrix M_;
  FactoredMatrix N_;
  FpMatrix L_;
  FpMatrix R_;
  std::vector<u64> buf_;
};

// Max w-weight of a chain a = i_0 < ... < i_k = c through pair variables of `family`.
std::vector<std::vector<u64>> chain_weights(const IsolationWeights& w, Family family, unsigned dim) {
  std::vector<std::vector<u64>> best(dim, std::vector<u64>(dim, 0));
  for (unsigned a = 0; a < dim; ++a)
    for (unsigned c = a + 1; c < dim; ++c) {
      u64 b = 0;
      for (unsigned k = a; k < c; ++k)
        b = std::max(b, best[a][k] + w.exponent(VariableId::make(family, k + 1, c + 1)));
      best[a][c] = b;
    }
  return best;
}

// Per-row bound on the w-weight of L(a, .) (chains of M into column dim-1-i, times y_i).
std::vector<u64> side_bounds(const IsolationWeights& w, Family pairs, Family diag, unsigned dim) {
  auto best = chain_weights(w, pairs, dim);
  std::vector<u64> out(dim, 0);
  for (unsigned a = 0; a < dim; ++a)
    for (unsigned i = 0; i < dim; ++i) {
      unsigned c = dim - 1 - i;
      if (c < a) continue;
      out[a] = std::max(out[a], best[a][c] + w.exponent(VariableId::make(diag, i + 1)));
    }
  return out;
}

// Upper bound on deg_w of the isolated polynomial without v, from the sampled weights.
u64 sampled_w_bound(const PipelineParams& p, const IsolationWeights& w) {
  u64 entry = 0;
  if (is_det(p)) {
    auto rows = side_bounds(w, Family::Lambda, Family::Y, p.n);
    auto cols = side_bounds(w, Family::Xi, Family::Z, p.m);
    entry = *std::max_element(rows.begin(), rows.end()) + *std::max_element(cols.begin(), cols.end());
  } else {
    auto rows = side_bounds(w, Family::Lambda, Family::Y, p.n);
    for (unsigned a = 0; a < p.n; ++a)
      for (unsigned b = a + 1; b < p.n; ++b) entry = std::max(entry, rows[a] + rows[b]);
  }
  return entry * p.d;
}

struct Candidate {
  Partition shape;
  std::vector<u64> values;  // at each probe matrix
};

std::vector<Candidate> canonical_candidates(const PipelineParams& p, const PrimeField& f, u64 v_degree,
                                            const std::vector<FpMatrix>& probes) {
  std::vector<Candidate> out;
  if (is_det(p)) {
    for (unsigned s = p.r; s <= p.d; ++s)
      for (const auto& sigma : enumerate_partitions(s, std::min(p.n, p.m))) {
        if (sigma.first() < p.r || 2 * canonical_weight(sigma) != v_degree) continue;
        BideterminantRef ref(Bitableau(canonical(sigma, p.n), canonical(sigma, p.m)), p.n, p.m);
        Candidate c{sigma, {}};
        for (const auto& x : probes) c.values.push_back(eval_bideterminant(f, ref, x));
        out.push_back(std::move(c));
      }
  } else {
    for (unsigned s = 2 * p.r; s <= 2 * p.d; s += 2)
      for (const auto& sigma : enumerate_partitions(s, p.n, true)) {
        if (sigma.first() < 2 * p.r || canonical_weight(sigma) != v_degree) continue;
        BipfaffianRef ref(canonical(sigma, p.n), p.n);
        Candidate c{sigma, {}};
        for (const auto& x : probes) c.values.push_back(eval_bipfaffian(f, ref, x));
        out.push_back(std::move(c));
      }
  }
  return out;
}

// c with values = c * cand at every probe, if one exists.
std::optional<u64> constant_ratio(const PrimeField& f, const std::vector<u64>& values, const std::vector<u64>& cand) {
  std::optional<u64> c;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (cand[k] == 0) {
      if (values[k] != 0) return std::nullopt;
      continue;
    }
    u64 ratio = f.mul(values[k], f.inv(cand[k]));
    if (c && *c != ratio) return std::nullopt;
    c = ratio;
  }
  if (!c || *c == 0) return std::nullopt;
  return c;
}

bool symbolic_tiny(const PipelineParams& p) {
  if (!p.symbolic_f || p.symbolic_f->is_zero()) return false;
  if (p.symbolic_f->total_degree().value() > 3) return false;
  return is_det(p) ? (p.n <= 3 && p.m <= 3) : p.n <= 6;
}

// Ladder step (ii): the lowest w-coefficient of the isolated symbolic polynomial sits
// at the scanned index and equals c times the identified canonical polynomial.
bool symbolic_extraction_check(const PipelineParams& p, const PrimeField& f, const IsolationWeights& w, u64 w_degree,
                               const Partition& shape, u64 scalar) {
  SparsePolynomial g = symbolic_g(*p.symbolic_f, p.ambient(), p.mode);
  SparsePolynomial h = apply_weights(g, w);
  u64 low = ~0ULL;
  for (const auto& [mono, c] : h.terms()) low = std::min<u64>(low, mono.exponent(VariableId::w()));
  if (low != w_degree) return false;
  SparsePolynomial coeff = h.coeff_of(VariableId::w(), static_cast<unsigned>(low));
  SparsePolynomial expect =
      is_det(p) ? expand_bideterminant(f, BideterminantRef(Bitableau(canonical(shape, p.n), canonical(shape, p.m)),
                                                           p.n, p.m))
                : expand_bipfaffian(f, BipfaffianRef(canonical(shape, p.n), p.n));
  return coeff == expect.scale(scalar);
}

u64 attempt_seed(u64 seed, unsigned attempt) { return SplitRng(seed).split(attempt).next(); }

std::string counts_message(u64 points, u64 budget, const char* what) {
  return std::string(what) + ": " + std::to_string(points) + " exceeds the budget of " + std::to_string(budget);
}

}  // namespace

PipelineParams PipelineParams::det(unsigned n, unsigned m, unsigned r, unsigned d) {
  PipelineParams p;
  p.mode = IdealMode::Det;
  p.n = n;
  p.m = m;
  p.r = r;
  p.d = d;
  return p;
}

PipelineParams PipelineParams::pfaff(unsigned half, unsigned r, unsigned d) {
  PipelineParams p;
  p.mode = IdealMode::Pfaff;
  p.n = p.m = 2 * half;
  p.r = r;
  p.d = d;
  return p;
}

std::vector<VariableId> PipelineParams::oracle_inputs() const {
  return is_det(*this) ? det_oracle_inputs(n, m) : pfaff_oracle_inputs(n);
}

std::vector<VariableId> PipelineParams::isolation_variables() const {
  std::vector<VariableId> vars;
  for (auto [i, j] : ordered_pairs(n)) vars.push_back(VariableId::lambda(i, j));
  if (is_det(*this))
    for (auto [i, j] : ordered_pairs(m)) vars.push_back(VariableId::xi(i, j));
  for (unsigned i = 1; i <= n; ++i) vars.push_back(VariableId::y(i));
  if (is_det(*this))
    for (unsigned j = 1; j <= m; ++j) vars.push_back(VariableId::z(j));
  return vars;
}

void PipelineParams::validate(const PrimeField& f) const {
  if (n == 0 || m == 0) throw InvalidArgument("ambient size must be positive");
  if (n > 64 || m > 64) throw CapExceeded("ambient size capped at 64");
  if (is_det(*this)) {
    if (r < 1 || r > std::min(n, m)) throw InvalidArgument("need 1 <= r <= min(n, m)");
  } else {
    if (n != m || n % 2) throw InvalidArgument("Pfaffian ambient must be 2n x 2n");
    if (r < 1 || 2 * r > n) throw InvalidArgument("need 1 <= r <= n for the Pfaffian ideal");
  }
  if (d < r) throw InvalidArgument("nonzero ideal members have degree at least r");
  if (retry_cap == 0 || probes == 0 || isolation_constant == 0)
    throw InvalidArgument("retry cap, probe count and isolation constant must be positive");
  if (!(eps > 0 && eps < 1)) throw InvalidArgument("isolation failure budget must lie in (0, 1)");
  if (f.p() <= d && !allow_small_characteristic)
    throw ParameterRejected("characteristic " + std::to_string(f.p()) + " does not exceed deg f = " +
                            std::to_string(d) + " (enable small-characteristic mode to proceed)");
}

std::pair<u64, u64> probe_v_window(const PipelineParams& params, const PrimeField& field, const OracleSpec& f) {
  Substitution sub(params, field, f);
  const u64 vmax = theoretical_v_max(params);
  if (vmax + 2 >= field.p()) throw FieldTooSmall(vmax + 2, field.p());
  SplitRng rng(params.seed ^ 0x5851f42d4c957f2dULL);
  std::vector<std::vector<u64>> values;
  for (int probe = 0; probe < 2; ++probe) {
    std::unordered_map<VariableId, u64> aux;
    for (auto v : params.isolation_variables()) aux[v] = rng.uniform(field.p() - 1);
    FpMatrix x = is_det(params) ? random_matrix(field, rng, params.n, params.m) : random_skew(field, rng, params.n);
    std::vector<u64> vals;
    for (u64 v = 1; v <= vmax + 1; ++v) {
      sub.set([&](VariableId id) { return aux.at(id); }, v);
      vals.push_back(sub.eval(x));
    }
    values.push_back(std::move(vals));
  }
  auto coeffs = low_coefficients(field, 1, values, vmax + 1);
  u64 lo = ~0ULL, hi = 0;
  for (const auto& c : coeffs)
    for (u64 k = 0; k < c.size(); ++k)
      if (c[k]) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
  if (lo == ~0ULL) throw IsolationFailure("the oracle polynomial vanishes at every probe (f appears to be zero)");
  if (lo < theoretical_v_min(params))
    throw IsolationFailure("membership suspect: v-degree " + std::to_string(lo) + " is below the ideal's minimum " +
                           std::to_string(theoretical_v_min(params)));
  return {lo, hi};
}

u64 worst_case_points(const PipelineParams& p) {
  u64 ell = p.isolation_variables().size();
  u64 M = isolation_range(p.isolation_constant * p.d, static_cast<unsigned>(ell), p.eps);
  // A row bound is at most (dim - 1) chain steps plus one diagonal weight.
  u64 entry = is_det(p) ? (u64{p.n} + p.m) * M : 2 * u64{p.n} * M;
  u64 w = entry * p.d;
  return (w + 1) * (theoretical_v_max(p) - theoretical_v_min(p)) + w + 1;
}

SizePlan size_plan(const PipelineParams& params, const PrimeField& field, const OracleSpec& f) {
  params.validate(field);
  SizePlan s;
  auto vars = params.isolation_variables();
  auto w = sample_weights(vars, params.isolation_constant * params.d, params.eps, attempt_seed(params.seed, 0));
  s.ell = w.ell;
  s.K = w.K;
  s.M = w.M;
  s.w_bound = sampled_w_bound(params, w);
  s.z_v = s.w_bound + 1;
  std::tie(s.v_lo, s.v_hi) = probe_v_window(params, field, f);
  s.points = s.z_v * (s.v_hi - s.v_lo) + s.w_bound + 1;
  s.worst_points = worst_case_points(params);
  return s;
}

ExtractionResult plan_extraction(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 unsigned first_attempt, ReductionReport* carry) {
  params.validate(field);
  ReductionReport report = carry ? *carry : ReductionReport{};
  report.params = params;
  report.prime = field.p();
  auto [v_lo, v_hi] = probe_v_window(params, field, f);
  report.v_lo = v_lo;
  report.v_hi = v_hi;
  const auto vars = params.isolation_variables();
  const unsigned K = params.isolation_constant * params.d;
  Substitution sub(params, field, f);
  std::string reasons;

  for (unsigned attempt = first_attempt; attempt < params.retry_cap; ++attempt) {
    AttemptRecord rec;
    rec.attempt = attempt;
    rec.seed = attempt_seed(params.seed, attempt);
    u64 w_bound = sampled_w_bound(params, sample_weights(vars, K, params.eps, rec.seed));
    IsolationWeights w = fold_v(sample_weights(vars, K, params.eps, rec.seed), v_hi, w_bound);
    rec.weights = w;
    rec.w_bound = w_bound;
    const u64 shift = w.z_v * v_lo;
    const u64 degree = w.total_w_bound - shift;
    const u64 n_points = degree + 1;
    rec.points = n_points;
    if (n_points > params.point_budget)
      throw ParameterRejected(counts_message(n_points, params.point_budget, "interpolation points"));
    if (n_points >= field.p()) throw FieldTooSmall(n_points + 1, field.p());

    // Probe matrices: the first `probes` drive the scan, two more guard the identification.
    SplitRng rng = SplitRng(rec.seed).split(1);
    std::vector<FpMatrix> xs;
    for (unsigned k = 0; k < params.probes + 2; ++k)
      xs.push_back(is_det(params) ? random_matrix(field, rng, params.n, params.m)
                                  : random_skew(field, rng, params.n));

    std::vector<u64> alphas(n_points);
    for (u64 j = 0; j < n_points; ++j) alphas[j] = j + 1;
    auto inv_alpha = field.inv_all(alphas);
    std::vector<std::vector<u64>> values(xs.size(), std::vector<u64>(n_points));
    std::vector<u64> unshift(n_points);
    std::vector<std::pair<VariableId, u64>> zs;
    for (std::size_t k = 0; k < w.vars.size(); ++k) zs.emplace_back(w.vars[k], w.z[k]);
    std::unordered_map<VariableId, u64> powers;
    for (u64 j = 0; j < n_points; ++j) {
      u64 a = alphas[j];
      for (auto [v, z] : zs) powers[v] = field.pow(a, z);
      sub.set([&](VariableId id) { return powers.at(id); }, field.pow(a, w.z_v));
      unshift[j] = field.pow(inv_alpha[j], shift);
      for (std::size_t k = 0; k < xs.size(); ++k) values[k][j] = field.mul(sub.eval(xs[k]), unshift[j]);
    }
    std::vector<std::vector<u64>> scan(values.begin(), values.begin() + params.probes);
    auto idx = first_nonzero_index(field, 1, scan);
    if (!idx) {
      rec.outcome = "every coefficient vanishes at the probes";
      reasons += "\n  attempt " + std::to_string(attempt) + ": " + rec.outcome;
      report.attempts.push_back(rec);
      continue;
    }
    rec.index = *idx;
    auto plan = build_plan(field, degree, *idx, 1);
    std::vector<u64> coeff(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) coeff[k] = apply_plan(field, plan, values[k]);

    const u64 v_degree = v_lo + *idx / w.z_v;
    std::optional<Partition> shape;
    u64 scalar = 0;
    for (const auto& cand : canonical_candidates(params, field, v_degree, xs))
      if (auto c = constant_ratio(field, coeff, cand.values)) {
        shape = cand.shape;
        scalar = *c;
        break;
      }
    if (!shape) {
      rec.outcome = "coefficient at index " + std::to_string(*idx) + " (v-degree " + std::to_string(v_degree) +
                    ") is not a multiple of a canonical " + (is_det(params) ? "bideterminant" : "bipfaffian");
      reasons += "\n  attempt " + std::to_string(attempt) + ": " + rec.outcome;
      report.attempts.push_back(rec);
      continue;
    }
    rec.shape = shape;
    rec.scalar = scalar;
    if (symbolic_tiny(params)) {
      rec.symbolic_ok = symbolic_extraction_check(params, field, w, shift + *idx, *shape, scalar);
      if (!*rec.symbolic_ok) {
        rec.outcome = "symbolic check rejected the extracted coefficient";
        reasons += "\n  attempt " + std::to_string(attempt) + ": " + rec.outcome;
        report.attempts.push_back(rec);
        continue;
      }
    }
    rec.outcome = "ok";
    report.attempts.push_back(rec);

    ExtractionPlan out{params, field, w, v_lo, v_hi, w_bound, shift, degree, *idx, {}, *shape, scalar, v_degree};
    out.weight.resize(n_points);
    for (u64 j = 0; j < n_points; ++j) out.weight[j] = field.mul(plan.row[j], unshift[j]);
    report.index = *idx;
    report.w_shift = shift;
    report.d_min = v_degree;
    report.shape = shape;
    report.scalar = scalar;
    report.symbolic_ok = rec.symbolic_ok;
    return {std::move(out), std::move(report)};
  }
  throw IsolationFailure("no verified isolation within " + std::to_string(params.retry_cap) + " attempts" + reasons);
}

OracleCircuit extraction_circuit(const ExtractionPlan& plan) {
  const auto& p = plan.params;
  const PrimeField& f = plan.field;
  // The substitution only needs an oracle spec for its arity check.
  OracleSpec dummy(static_cast<unsigned>(p.oracle_inputs().size()), 1, [](const u64*) { return u64{0}; });
  Substitution sub(p, f, dummy);
  CircuitBuilder b(f);
  const unsigned arity = dummy.arity;
  b.reserve(plan.points() * (arity + 1) + p.n * p.m + 2, plan.points() * arity * (p.n * p.m + 1) + plan.points());
  std::vector<GateId> x_gate;
  if (is_det(p)) {
    for (unsigned i = 1; i <= p.n; ++i)
      for (unsigned j = 1; j <= p.m; ++j) x_gate.push_back(b.input(VariableId::x(i, j)));
  } else {
    x_gate.assign(p.n * p.n, ~0u);
    for (unsigned i = 1; i <= p.n; ++i)
      for (unsigned j = i + 1; j <= p.n; ++j) x_gate[(i - 1) * p.n + (j - 1)] = b.input(VariableId::x(i, j));
  }
  std::vector<GateId> top;
  std::vector<u64> top_w;
  std::unordered_map<VariableId, u64> powers;
  std::vector<GateId> ins, ch;
  std::vector<u64> wt;
  for (u64 j = 0; j < plan.points(); ++j) {
    u64 a = j + 1;
    for (std::size_t k = 0; k < plan.weights.vars.size(); ++k) powers[plan.weights.vars[k]] = f.pow(a, plan.weights.z[k]);
    sub.set([&](VariableId id) { return powers.at(id); }, f.pow(a, plan.weights.z_v));
    const FpMatrix& L = sub.left();
    const FpMatrix& R = sub.right();
    ins.clear();
    for (unsigned ra = 0; ra < p.n; ++ra)
      for (unsigned cb = is_det(p) ? 0 : ra + 1; cb < p.m; ++cb) {
        ch.clear();
        wt.clear();
        if (is_det(p)) {
          for (unsigned i = 0; i < p.n; ++i)
            for (unsigned l = 0; l < p.m; ++l) {
              u64 c = f.mul(L(ra, i), R(l, cb));
              if (c) {
                ch.push_back(x_gate[i * p.m + l]);
                wt.push_back(c);
              }
            }
        } else {
          // (P X P^T)(a, b) = sum_{i<l} (P_ai P_bl - P_al P_bi) x_il.
          for (unsigned i = 0; i < p.n; ++i)
            for (unsigned l = i + 1; l < p.n; ++l) {
              u64 c = f.sub(f.mul(L(ra, i), L(cb, l)), f.mul(L(ra, l), L(cb, i)));
              if (c) {
                ch.push_back(x_gate[i * p.n + l]);
                wt.push_back(c);
              }
            }
        }
        ins.push_back(b.sum(ch, wt));
      }
    top.push_back(b.oracle(ins));
    top_w.push_back(plan.weight[j]);
  }
  return b.finish(b.sum(top, top_w));
}

CircuitResult extract_canonical(const PipelineParams& params, const PrimeField& field, const OracleSpec& f) {
  auto ext = plan_extraction(params, field, f);
  CircuitResult res{extraction_circuit(ext.plan), std::move(ext.report)};
  res.report.metrics = res.circuit.metrics();
  res.report.target = "canonical";
  // Probe agreement against the identified canonical polynomial.
  SplitRng rng(params.seed ^ 0xa0761d6478bd642fULL);
  const auto inputs = params.oracle_inputs();
  for (unsigned k = 0; k < params.probes; ++k) {
    FpMatrix x = is_det(params) ? random_matrix(field, rng, params.n, params.m) : random_skew(field, rng, params.n);
    std::unordered_map<VariableId, u64> pt;
    for (auto v : inputs) pt[v] = x(v.i() - 1, v.j() - 1);
    u64 expect = is_det(params)
                     ? eval_bideterminant(field,
                                          BideterminantRef(Bitableau(canonical(ext.plan.shape, params.n),
                                                                     canonical(ext.plan.shape, params.m)),
                                                           params.n, params.m),
                                          x)
                     : eval_bipfaffian(field, BipfaffianRef(canonical(ext.plan.shape, params.n), params.n), x);
    ++res.report.probe_checks;
    if (res.circuit.eval(&f, pt) == field.mul(ext.plan.scalar, expect)) ++res.report.probe_agreements;
  }
  return res;
}

CircuitResult extract_canonical_pfaff(const PipelineParams& params, const PrimeField& field, const OracleSpec& f) {
  if (params.mode != IdealMode::Pfaff) throw InvalidArgument("extract_canonical_pfaff needs Pfaffian parameters");
  return extract_canonical(params, field, f);
}

namespace {

// Affine ambient matrix decomposed as C0 + sum_v y_v G_v (+ hom G_hom).
struct AffineParts {
  FpMatrix constant;
  FpMatrix hom;
  std::vector<VariableId> vars;
  std::vector<FpMatrix> coeff;
};

AffineParts decompose(const AffineMatrix& e, const std::vector<VariableId>& vars) {
  AffineParts parts{FpMatrix(e.rows, e.cols), FpMatrix(e.rows, e.cols), vars, {}};
  parts.coeff.assign(vars.size(), FpMatrix(e.rows, e.cols));
  for (unsigned i = 0; i < e.rows; ++i)
    for (unsigned j = 0; j < e.cols; ++j) {
      const AffineForm& a = e.at(i, j);
      parts.constant(i, j) = a.constant;
      for (const auto& [v, c] : a.terms) {
        if (v == VariableId::hom()) {
          parts.hom(i, j) = c;
          continue;
        }
        auto it = std::find(vars.begin(), vars.end(), v);
        if (it == vars.end()) throw std::logic_error("embedding uses an unexpected variable " + v.name());
        parts.coeff[it - vars.begin()](i, j) = c;
      }
    }
  return parts;
}

CircuitResult compose_target(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                             const ABP& target, const std::string& label) {
  params.validate(field);
  if (target.field().p() != field.p()) throw ConfigurationError("target ABP over a different field");
  if (target.vertex_count() > params.r)
    throw ParameterRejected("target ABP has " + std::to_string(target.vertex_count()) +
                            " vertices, more than r = " + std::to_string(params.r));
  const bool det = is_det(params);
  ABP hom = homogenize_abp(target, VariableId::hom());
  AffineMatrix a = valiant_embed(hom, params.r);
  AffineMatrix amb = det ? extend_to_ambient(a, params.n, params.m)
                         : skew_symmetrize(field, extend_to_ambient(a, params.n / 2, params.n / 2)).matrix;
  const auto yvars = target.variables();
  AffineParts parts = decompose(amb, yvars);
  const unsigned L_deg = target.depth();
  const u64 t_max = params.d / params.r;
  const u64 d_delta = t_max * L_deg;
  const u64 n_delta = d_delta + 1;
  if (n_delta >= field.p()) throw FieldTooSmall(n_delta, field.p());

  auto g_at = [&](const std::unordered_map<VariableId, u64>& pt) { return target.eval(pt); };
  auto random_point = [&](SplitRng& rng) {
    std::unordered_map<VariableId, u64> pt;
    for (auto v : yvars) pt[v] = rng.uniform(field.p() - 1);
    return pt;
  };

  unsigned next_attempt = 0;
  ReductionReport carry;
  std::string reasons;
  while (next_attempt < params.retry_cap) {
    auto ext = plan_extraction(params, field, f, next_attempt, &carry);
    next_attempt = ext.report.attempts.back().attempt + 1;
    carry = ext.report;
    const ExtractionPlan& plan = ext.plan;
    const u64 gates = plan.points() * n_delta;
    if (gates > params.oracle_budget)
      throw ParameterRejected(counts_message(gates, params.oracle_budget, "oracle gates"));

    Substitution sub(params, field, f);
    // Numeric pass: raw delta-values at each probe point.
    SplitRng rng = SplitRng(ext.report.attempts.back().seed).split(7);
    const unsigned n_probe = params.probes + 1;
    std::vector<std::unordered_map<VariableId, u64>> pts;
    for (unsigned q = 0; q < n_probe; ++q) pts.push_back(random_point(rng));
    std::vector<std::vector<u64>> raw(n_probe, std::vector<u64>(n_delta, 0));
    std::unordered_map<VariableId, u64> powers;
    const std::size_t arity = f.arity;
    std::vector<u64> t0(arity), th(arity), s(arity), in(arity);
    std::vector<std::vector<u64>> tv(yvars.size(), std::vector<u64>(arity));
    auto project = [&](const FpMatrix& mtx, std::vector<u64>& out) { sub.inputs_of(sub.image(mtx), out.data()); };
    for (u64 j = 0; j < plan.points(); ++j) {
      u64 al = j + 1;
      for (std::size_t k = 0; k < plan.weights.vars.size(); ++k)
        powers[plan.weights.vars[k]] = field.pow(al, plan.weights.z[k]);
      sub.set([&](VariableId id) { return powers.at(id); }, field.pow(al, plan.weights.z_v));
      project(parts.constant, t0);
      project(parts.hom, th);
      for (std::size_t v = 0; v < yvars.size(); ++v) project(parts.coeff[v], tv[v]);
      for (unsigned q = 0; q < n_probe; ++q) {
        for (std::size_t e = 0; e < arity; ++e) {
          u64 acc = th[e];
          for (std::size_t v = 0; v < yvars.size(); ++v) acc = field.add(acc, field.mul(pts[q].at(yvars[v]), tv[v][e]));
          s[e] = acc;
        }
        for (u64 k = 0; k < n_delta; ++k) {
          for (std::size_t e = 0; e < arity; ++e) in[e] = field.add(t0[e], field.mul(k, s[e]));
          raw[q][k] = field.add(raw[q][k], field.mul(plan.weight[j], sub.call(in.data())));
        }
      }
    }
    auto coeffs = low_coefficients(field, 0, raw, n_delta);
    // First nonzero among deg(g^)*p^e: index L in characteristic 0 or p > t, else the
    // smallest p-power the binomial coefficient survives.
    std::optional<u64> index;
    u64 power = 1;
    for (u64 pw = 1; pw * L_deg <= d_delta; pw *= field.p()) {
      bool nz = std::any_of(coeffs.begin(), coeffs.end(), [&](const auto& c) { return c[pw * L_deg] != 0; });
      if (nz) {
        index = pw * L_deg;
        power = pw;
        break;
      }
      if (pw > d_delta / field.p()) break;
    }
    if (!index) {
      reasons += "\n  attempt " + std::to_string(next_attempt - 1) + ": delta coefficient vanishes at the probes";
      continue;
    }
    // Normalization against the independently evaluated target.
    std::optional<u64> scale;
    bool consistent = true;
    for (unsigned q = 0; q < n_probe; ++q) {
      u64 want = field.pow(g_at(pts[q]), power);
      u64 got = coeffs[q][*index];
      if (!scale && want != 0 && got != 0) scale = field.mul(want, field.inv(got));
    }
    if (!scale) throw IsolationFailure("normalization point search exhausted: target vanishes at every probe");
    for (unsigned q = 0; q < n_probe; ++q)
      consistent &= field.mul(*scale, coeffs[q][*index]) == field.pow(g_at(pts[q]), power);
    if (!consistent) {
      reasons += "\n  attempt " + std::to_string(next_attempt - 1) + ": delta coefficient is not proportional to g";
      continue;
    }

    // Circuit pass.
    auto delta_plan = build_plan(field, d_delta, *index, 0);
    CircuitBuilder b(field);
    std::size_t form_wires = yvars.size() + 1;
    b.reserve(gates * (arity + 1) + yvars.size() + 4, gates * (arity * form_wires + arity) + gates);
    for (auto v : yvars) b.input(v);
    std::vector<GateId> top, ins;
    std::vector<u64> top_w;
    top.reserve(gates);
    top_w.reserve(gates);
    AffineForm form;
    for (u64 j = 0; j < plan.points(); ++j) {
      u64 al = j + 1;
      for (std::size_t k = 0; k < plan.weights.vars.size(); ++k)
        powers[plan.weights.vars[k]] = field.pow(al, plan.weights.z[k]);
      sub.set([&](VariableId id) { return powers.at(id); }, field.pow(al, plan.weights.z_v));
      project(parts.constant, t0);
      project(parts.hom, th);
      for (std::size_t v = 0; v < yvars.size(); ++v) project(parts.coeff[v], tv[v]);
      for (u64 k = 0; k < n_delta; ++k) {
        ins.clear();
        for (std::size_t e = 0; e < arity; ++e) {
          form.constant = field.add(t0[e], field.mul(k, th[e]));
          form.terms.clear();
          for (std::size_t v = 0; v < yvars.size(); ++v) {
            u64 c = field.mul(k, tv[v][e]);
            if (c) form.terms.emplace_back(yvars[v], c);
          }
          ins.push_back(b.affine(form));
        }
        top.push_back(b.oracle(ins));
        top_w.push_back(field.mul(*scale, field.mul(plan.weight[j], delta_plan.row[k])));
      }
    }
    CircuitResult res{b.finish(b.sum(top, top_w)), ext.report};
    ReductionReport& rep = res.report;
    rep.target = label;
    rep.target_depth = L_deg;
    rep.target_vertices = target.vertex_count();
    rep.delta_points = n_delta;
    rep.delta_index = *index;
    rep.power = power;
    rep.normalization = *scale;
    rep.binomial_t = 0;
    if (rep.shape)
      for (unsigned part : rep.shape->parts()) rep.binomial_t += part >= (det ? params.r : 2 * params.r);
    rep.metrics = res.circuit.metrics();
    rep.oracle_budget = params.oracle_budget;
    // Ladder step (i): fresh probes against g^power.
    SplitRng check = SplitRng(params.seed).split(0xc0ffee);
    for (unsigned q = 0; q < params.probes; ++q) {
      auto pt = random_point(check);
      ++rep.probe_checks;
      if (res.circuit.eval(&f, pt) == field.pow(g_at(pt), power)) ++rep.probe_agreements;
    }
    if (rep.probe_agreements != rep.probe_checks) {
      reasons += "\n  attempt " + std::to_string(next_attempt - 1) + ": final circuit disagrees with the target";
      continue;
    }
    return res;
  }
  throw IsolationFailure("no verified reduction within " + std::to_string(params.retry_cap) + " attempts" + reasons);
}

}  // namespace

CircuitResult abp_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 const ABP& target, const std::string& label) {
  if (params.mode != IdealMode::Det) throw InvalidArgument("abp_oracle_circuit needs determinantal parameters");
  return compose_target(params, field, f, target, label);
}

CircuitResult abp_pfaff_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                       const ABP& target, const std::string& label) {
  if (params.mode != IdealMode::Pfaff) throw InvalidArgument("abp_pfaff_oracle_circuit needs Pfaffian parameters");
  return compose_target(params, field, f, target, label);
}

CircuitResult det_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 unsigned t) {
  return abp_oracle_circuit(params, field, f, mv_det_abp(field, t), "det_" + std::to_string(t));
}

CircuitResult imm_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                 unsigned width, unsigned length) {
  return abp_oracle_circuit(params, field, f, imm_abp(field, length, width),
                            "imm_" + std::to_string(width) + "_" + std::to_string(length));
}

CircuitResult pfaff_oracle_circuit(const PipelineParams& params, const PrimeField& field, const OracleSpec& f,
                                   unsigned t) {
  if (t > kPfaffAbpCap)
    throw ParameterRejected("the matching-enumeration Pfaffian ABP is capped at t = " + std::to_string(kPfaffAbpCap) +
                            "; larger t needs a polynomial-size Pfaffian ABP construction");
  return abp_pfaff_oracle_circuit(params, field, f, pfaff_abp(field, t), "pfaff_" + std::to_string(t));
}

OracleSpec leading_minor_oracle(const PrimeField& field, unsigned n, unsigned m, unsigned r) {
  if (r < 1 || r > std::min(n, m)) throw InvalidArgument("minor size out of range");
  PrimeField f = field;
  return OracleSpec(n * m, r, [f, m, r](const u64* in) {
    FpMatrix x(r, r);
    for (unsigned i = 0; i < r; ++i)
      for (unsigned j = 0; j < r; ++j) x(i, j) = in[i * m + j];
    return det(f, x);
  }, true);
}

OracleSpec leading_pfaffian_oracle(const PrimeField& field, unsigned two_n, unsigned r) {
  if (two_n % 2 || r < 1 || 2 * r > two_n) throw InvalidArgument("Pfaffian size out of range");
  PrimeField f = field;
  // Position of x_ij (i<j, 0-based) in the upper-triangle input order.
  std::vector<unsigned> pos(two_n * two_n, 0);
  unsigned k = 0;
  for (unsigned i = 0; i < two_n; ++i)
    for (unsigned j = i + 1; j < two_n; ++j) pos[i * two_n + j] = k++;
  return OracleSpec(k, r, [f, pos, two_n, r](const u64* in) {
    unsigned s = 2 * r;
    FpMatrix x(s, s);
    for (unsigned i = 0; i < s; ++i)
      for (unsigned j = i + 1; j < s; ++j) {
        x(i, j) = in[pos[i * two_n + j]];
        x(j, i) = f.neg(x(i, j));
      }
    return pfaff(f, x);
  }, true);
}

}  // namespace idealred
