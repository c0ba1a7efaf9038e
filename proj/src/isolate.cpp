#include "idealred/isolate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "idealred/errors.hpp"

namespace idealred {

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t SplitRng::next() { return mix(mix(seed_ ^ mix(stream_)) + counter_++); }

std::uint64_t SplitRng::uniform(std::uint64_t hi) {
  if (hi == ~0ULL) return next();
  std::uint64_t range = hi + 1;
  std::uint64_t limit = ~0ULL - (~0ULL % range);
  for (;;) {
    std::uint64_t x = next();
    if (x < limit) return x % range;
  }
}

SplitRng SplitRng::split(std::uint64_t k) const { return SplitRng(mix(seed_ ^ mix(stream_)), k); }

std::uint64_t IsolationWeights::exponent(VariableId v) const {
  if (v == VariableId::v()) return z_v;
  auto it = std::find(vars.begin(), vars.end(), v);
  if (it == vars.end()) throw InvalidArgument("no isolation weight for " + v.name());
  return z[it - vars.begin()];
}

std::uint64_t isolation_range(unsigned K, unsigned ell, double eps) {
  if (!(eps > 0 && eps < 1)) throw InvalidArgument("isolation failure budget must lie in (0, 1)");
  if (K == 0 || ell == 0) throw InvalidArgument("isolation needs K >= 1 and at least one variable");
  double m = std::ceil(static_cast<double>(K) * ell / eps - 1e-9);
  return static_cast<std::uint64_t>(m);
}

IsolationWeights sample_weights(const std::vector<VariableId>& vars, unsigned K, double eps, std::uint64_t seed) {
  IsolationWeights w;
  w.vars = vars;
  w.K = K;
  w.ell = static_cast<unsigned>(vars.size());
  w.eps = eps;
  w.M = isolation_range(K, w.ell, eps);
  w.seed = seed;
  if (std::set<VariableId>(vars.begin(), vars.end()).size() != vars.size())
    throw InvalidArgument("isolation variables must be distinct");
  SplitRng rng(seed);
  for (std::size_t k = 0; k < vars.size(); ++k) w.z.push_back(rng.uniform(w.M));
  return w;
}

IsolationWeights fold_v(IsolationWeights w, std::uint64_t deg_v_bound, std::uint64_t deg_w_bound) {
  w.z_v = deg_w_bound + 1;
  w.deg_v_bound = deg_v_bound;
  w.deg_w_bound = deg_w_bound;
  w.total_w_bound = w.z_v * deg_v_bound + deg_w_bound;
  return w;
}

std::uint64_t default_w_bound(const IsolationWeights& w) { return static_cast<std::uint64_t>(w.ell) * w.K * w.M; }

SparsePolynomial apply_weights(const SparsePolynomial& p, const IsolationWeights& w) {
  SparsePolynomial out(p.field());
  for (const auto& [m, c] : p.terms()) {
    std::uint64_t e = 0;
    std::vector<Monomial::Entry> rest;
    for (const auto& [v, k] : m.entries()) {
      bool weighted = v == VariableId::v() || std::find(w.vars.begin(), w.vars.end(), v) != w.vars.end();
      if (weighted)
        e += w.exponent(v) * k;
      else
        rest.emplace_back(v, k);
    }
    if (e > 0xffffffffULL) throw CapExceeded("weighted exponent exceeds 32 bits");
    rest.emplace_back(VariableId::w(), static_cast<std::uint32_t>(e));
    out.add_term(Monomial(rest), c);
  }
  return out;
}

IsolationStats isolation_stats(const std::vector<std::vector<unsigned>>& collection, std::uint64_t trials, double eps,
                               std::uint64_t seed, unsigned K) {
  if (collection.empty()) throw InvalidArgument("isolation_stats needs a nonempty collection");
  std::size_t ell = collection.front().size();
  unsigned maxc = 0;
  for (const auto& e : collection) {
    if (e.size() != ell) throw InvalidArgument("collection vectors differ in length");
    for (unsigned c : e) maxc = std::max(maxc, c);
  }
  if (std::set<std::vector<unsigned>>(collection.begin(), collection.end()).size() != collection.size())
    throw InvalidArgument("collection vectors must be distinct");
  if (K == 0) K = std::max(1u, maxc);
  if (maxc > K) throw InvalidArgument("collection coefficient exceeds K");
  IsolationStats st;
  st.K = K;
  st.ell = static_cast<unsigned>(std::max<std::size_t>(ell, 1));
  st.M = isolation_range(K, st.ell, eps);
  st.trials = trials;
  SplitRng root(seed);
  std::vector<std::uint64_t> z(ell);
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitRng rng = root.split(t);
    for (auto& x : z) x = rng.uniform(st.M);
    std::uint64_t best = ~0ULL;
    unsigned ties = 0;
    for (const auto& e : collection) {
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < ell; ++i) v += z[i] * e[i];
      if (v < best) {
        best = v;
        ties = 1;
      } else if (v == best) {
        ++ties;
      }
    }
    if (ties > 1) ++st.failures;
  }
  st.rate = trials ? static_cast<double>(st.failures) / static_cast<double>(trials) : 0.0;
  st.bound = eps + 3.0 * std::sqrt(eps * (1 - eps) / static_cast<double>(std::max<std::uint64_t>(trials, 1)));
  return st;
}

std::vector<std::vector<unsigned>> adversarial_collection(const std::string& name, unsigned size) {
  if (size == 0) throw InvalidArgument("collection size must be positive");
  std::vector<std::vector<unsigned>> col;
  if (name == "progression") {
    for (unsigned k = 0; k <= size; ++k) col.push_back({k, size - k, k % 2});
  } else if (name == "weight2") {
    if (size < 2) throw InvalidArgument("weight2 needs at least two coordinates");
    for (unsigned i = 0; i < size; ++i)
      for (unsigned j = i + 1; j < size; ++j) {
        std::vector<unsigned> e(size, 0);
        e[i] = e[j] = 1;
        col.push_back(std::move(e));
      }
  } else if (name == "simplex") {
    for (unsigned a = 0; a <= size; ++a)
      for (unsigned b = 0; a + b <= size; ++b) col.push_back({a, b, size - a - b});
  } else {
    throw InvalidArgument("unknown collection '" + name + "'");
  }
  return col;
}

const std::vector<std::string>& adversarial_collection_names() {
  static const std::vector<std::string> names{"progression", "weight2", "simplex"};
  return names;
}

}  // namespace idealred
