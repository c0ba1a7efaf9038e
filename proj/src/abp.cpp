#include "idealred/abp.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "idealred/errors.hpp"

namespace idealred {

namespace {

AffineForm scaled(const PrimeField& f, const AffineForm& a, u64 c) {
  AffineForm out{f.mul(a.constant, c), {}};
  for (const auto& [v, k] : a.terms) out.terms.emplace_back(v, f.mul(k, c));
  return out;
}

void accumulate(const PrimeField& f, AffineForm& into, const AffineForm& a) {
  into.constant = f.add(into.constant, a.constant);
  for (const auto& [v, k] : a.terms) {
    auto it = std::find_if(into.terms.begin(), into.terms.end(), [&](const auto& t) { return t.first == v; });
    if (it == into.terms.end())
      into.terms.emplace_back(v, k);
    else
      it->second = f.add(it->second, k);
  }
  std::erase_if(into.terms, [](const auto& t) { return t.second == 0; });
}

AffineForm single(VariableId v, u64 c) { return AffineForm{0, {{v, c}}}; }

}  // namespace

ABP::ABP(const PrimeField& f, std::vector<unsigned> layer_sizes, std::vector<AbpEdge> edges)
    : field_(f), layers_(std::move(layer_sizes)), edges_(std::move(edges)) {
  if (layers_.size() < 2) throw InvalidArgument("ABP needs at least two layers");
  if (layers_.front() != 1 || layers_.back() != 1) throw InvalidArgument("ABP needs a single source and a single sink");
  for (unsigned s : layers_)
    if (s == 0) throw InvalidArgument("ABP layers must be nonempty");
  for (const auto& e : edges_) {
    if (e.layer < 1 || e.layer >= layers_.size()) throw InvalidArgument("ABP edge targets a nonexistent layer");
    if (e.from >= layers_[e.layer - 1] || e.to >= layers_[e.layer])
      throw InvalidArgument("ABP edge endpoint outside its layer");
  }
}

unsigned ABP::vertex_count() const noexcept {
  unsigned n = 0;
  for (unsigned s : layers_) n += s;
  return n;
}

std::vector<VariableId> ABP::variables() const {
  std::set<VariableId> vs;
  for (const auto& e : edges_)
    for (const auto& [v, c] : e.label.terms) vs.insert(v);
  return {vs.begin(), vs.end()};
}

u64 ABP::eval(const std::unordered_map<VariableId, u64>& point) const {
  std::vector<std::vector<u64>> val(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) val[l].assign(layers_[l], 0);
  val[0][0] = 1;
  // Edges may come in any order; sweep layer by layer.
  std::vector<std::vector<const AbpEdge*>> by_layer(layers_.size());
  for (const auto& e : edges_) by_layer[e.layer].push_back(&e);
  for (std::size_t l = 1; l < layers_.size(); ++l)
    for (const AbpEdge* e : by_layer[l])
      val[l][e->to] = field_.add(val[l][e->to], field_.mul(val[l - 1][e->from], e->label.eval(field_, point)));
  return val.back()[0];
}

SparsePolynomial ABP::to_polynomial() const {
  std::vector<std::vector<SparsePolynomial>> val(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) val[l].assign(layers_[l], SparsePolynomial(field_));
  val[0][0] = SparsePolynomial::constant(field_, 1);
  std::vector<std::vector<const AbpEdge*>> by_layer(layers_.size());
  for (const auto& e : edges_) by_layer[e.layer].push_back(&e);
  for (std::size_t l = 1; l < layers_.size(); ++l)
    for (const AbpEdge* e : by_layer[l]) val[l][e->to] += val[l - 1][e->from] * e->label.to_polynomial(field_);
  return val.back()[0];
}

ABP homogenize_abp(const ABP& a, VariableId z) {
  auto vars = a.variables();
  if (std::find(vars.begin(), vars.end(), z) != vars.end())
    throw InvalidArgument("homogenizing variable " + z.name() + " already occurs in the ABP");
  std::vector<AbpEdge> edges = a.edges();
  for (auto& e : edges) {
    if (e.label.constant) e.label.terms.emplace_back(z, e.label.constant);
    e.label.constant = 0;
  }
  return ABP(a.field(), a.layer_sizes(), std::move(edges));
}

PolyMatrix AffineMatrix::to_poly(const PrimeField& f) const {
  PolyMatrix m(f, rows, cols);
  for (unsigned i = 0; i < rows; ++i)
    for (unsigned j = 0; j < cols; ++j) m.at(i, j) = at(i, j).to_polynomial(f);
  return m;
}

FpMatrix AffineMatrix::eval(const PrimeField& f, const std::unordered_map<VariableId, u64>& point) const {
  FpMatrix m(rows, cols);
  for (unsigned i = 0; i < rows; ++i)
    for (unsigned j = 0; j < cols; ++j) m(i, j) = at(i, j).eval(f, point);
  return m;
}

AffineMatrix valiant_embed(const ABP& a, unsigned r) {
  const PrimeField& f = a.field();
  unsigned v = a.vertex_count();
  if (r < v) throw InvalidArgument("embedding dimension " + std::to_string(r) + " below the ABP vertex count " +
                                   std::to_string(v));
  // Global index of (layer, node); the sink goes to r-1 so padding sits just before it.
  std::vector<unsigned> offset(a.layer_sizes().size(), 0);
  for (std::size_t l = 1; l < offset.size(); ++l) offset[l] = offset[l - 1] + a.layer_sizes()[l - 1];
  auto index = [&](unsigned layer, unsigned node) { return layer + 1 == offset.size() ? r - 1 : offset[layer] + node; };

  AffineMatrix m(r, r);
  for (unsigned i = 0; i < r; ++i) m.at(i, i).constant = 1;
  for (const auto& e : a.edges())
    accumulate(f, m.at(index(e.layer - 1, e.from), index(e.layer, e.to)), scaled(f, e.label, f.neg(1)));
  m.at(r - 1, 0).constant = f.add(m.at(r - 1, 0).constant, 1);
  return m;
}

AffineMatrix extend_to_ambient(const AffineMatrix& a, unsigned n, unsigned m) {
  if (a.rows != a.cols) throw InvalidArgument("extend_to_ambient expects a square matrix");
  if (a.rows > std::min(n, m)) throw InvalidArgument("matrix larger than the ambient size");
  AffineMatrix out(n, m);
  for (unsigned i = 0; i < a.rows; ++i)
    for (unsigned j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
  for (unsigned i = a.rows; i < std::min(n, m); ++i) out.at(i, i).constant = 1;
  return out;
}

PolyMatrix extend_to_ambient(const PolyMatrix& a, unsigned n, unsigned m) {
  if (a.rows() != a.cols()) throw InvalidArgument("extend_to_ambient expects a square matrix");
  if (a.rows() > std::min(n, m)) throw InvalidArgument("matrix larger than the ambient size");
  PolyMatrix out(a.field(), n, m);
  for (unsigned i = 0; i < a.rows(); ++i)
    for (unsigned j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (unsigned i = a.rows(); i < std::min(n, m); ++i) out.at(i, i) = SparsePolynomial::constant(a.field(), 1);
  return out;
}

ABP mv_det_abp(const PrimeField& f, unsigned t) {
  if (t == 0) throw InvalidArgument("mv_det_abp needs t >= 1");
  // Open clow state (head, current) at layers 1..t-1. The source acts as every
  // (h, h) at once; closing edges on the last step go to the sink.
  using State = std::pair<unsigned, unsigned>;
  struct RawEdge {
    unsigned layer;
    int from;  // -1: source
    State from_state;
    bool to_sink;
    State to_state;
    AffineForm label;
  };
  std::vector<RawEdge> raw;
  std::vector<std::set<State>> layer(t + 1);
  u64 sink_sign = t % 2 ? f.neg(1) : 1;  // (-1)^t, combined with -1 per closed clow
  auto expand = [&](unsigned l, int from, State s) {
    auto [h, u] = s;
    for (unsigned v = h + 1; v <= t; ++v)
      if (l + 1 < t) {
        raw.push_back({l + 1, from, s, false, {h, v}, single(VariableId::u(u, v), 1)});
        layer[l + 1].insert({h, v});
      }
    AffineForm close = single(VariableId::u(u, h), f.neg(1));
    if (l + 1 == t) {
      raw.push_back({t, from, s, true, {}, scaled(f, close, sink_sign)});
    } else {
      for (unsigned h2 = h + 1; h2 <= t; ++h2) {
        raw.push_back({l + 1, from, s, false, {h2, h2}, close});
        layer[l + 1].insert({h2, h2});
      }
    }
  };
  for (unsigned h = 1; h <= t; ++h) expand(0, -1, {h, h});
  for (unsigned l = 1; l < t; ++l)
    for (State s : std::set<State>(layer[l])) expand(l, 0, s);

  // Keep states that can still reach the sink.
  std::vector<std::set<State>> alive(t + 1);
  for (unsigned l = t; l-- > 1;)
    for (const auto& e : raw)
      if (e.layer == l + 1 && (e.to_sink || alive[l + 1].count(e.to_state)) && e.from >= 0)
        alive[l].insert(e.from_state);
  std::vector<std::map<State, unsigned>> id(t + 1);
  std::vector<unsigned> sizes(t + 1, 1);
  for (unsigned l = 1; l < t; ++l) {
    for (State s : alive[l]) id[l].emplace(s, static_cast<unsigned>(id[l].size()));
    sizes[l] = static_cast<unsigned>(id[l].size());
  }
  std::vector<AbpEdge> edges;
  for (const auto& e : raw) {
    unsigned from = 0;
    if (e.from >= 0) {
      auto it = id[e.layer - 1].find(e.from_state);
      if (it == id[e.layer - 1].end()) continue;
      from = it->second;
    }
    unsigned to = 0;
    if (!e.to_sink) {
      auto it = id[e.layer].find(e.to_state);
      if (it == id[e.layer].end()) continue;
      to = it->second;
    }
    edges.push_back({e.layer, from, to, e.label});
  }
  return ABP(f, sizes, std::move(edges));
}

ABP imm_abp(const PrimeField& f, unsigned len, unsigned dim) {
  if (len == 0 || dim == 0) throw InvalidArgument("imm_abp needs positive length and dimension");
  std::vector<unsigned> sizes(len + 1, dim);
  sizes.front() = sizes.back() = 1;
  std::vector<AbpEdge> edges;
  for (unsigned k = 1; k <= len; ++k) {
    unsigned rows = k == 1 ? 1 : dim;
    unsigned cols = k == len ? 1 : dim;
    for (unsigned i = 0; i < rows; ++i)
      for (unsigned j = 0; j < cols; ++j) edges.push_back({k, i, j, single(VariableId::u(k, i + 1, j + 1), 1)});
  }
  return ABP(f, sizes, std::move(edges));
}

ABP pfaff_abp(const PrimeField& f, unsigned t) {
  if (t == 0 || t % 2) throw InvalidArgument("pfaff_abp needs a positive even dimension");
  if (t > kPfaffAbpCap) throw CapExceeded("pfaff_abp capped at t = " + std::to_string(kPfaffAbpCap));
  unsigned steps = t / 2;
  std::vector<std::map<unsigned, unsigned>> id(steps + 1);
  id[0][0] = 0;
  std::vector<AbpEdge> edges;
  for (unsigned l = 0; l < steps; ++l) {
    for (auto [mask, from] : id[l]) {
      unsigned a = 0;
      while (mask & (1u << a)) ++a;
      for (unsigned b = a + 1; b < t; ++b) {
        if (mask & (1u << b)) continue;
        unsigned next = mask | (1u << a) | (1u << b);
        auto [it, fresh] = id[l + 1].emplace(next, static_cast<unsigned>(id[l + 1].size()));
        u64 c = matching_edge_sign(mask, a, b) < 0 ? f.neg(1) : 1;
        edges.push_back({l + 1, from, it->second, single(VariableId::u(a + 1, b + 1), c)});
      }
    }
  }
  std::vector<unsigned> sizes;
  for (const auto& m : id) sizes.push_back(static_cast<unsigned>(m.size()));
  return ABP(f, sizes, std::move(edges));
}

namespace {

// Sign per k, read off the layout on the identity (det of every leading block is 1).
std::vector<int> skew_signs(const PrimeField& f, unsigned n) {
  FpMatrix m(2 * n, 2 * n);
  for (unsigned i = 0; i < n; ++i) {
    m(2 * i, 2 * i + 1) = 1;
    m(2 * i + 1, 2 * i) = f.neg(1);
  }
  std::vector<int> out;
  for (unsigned k = 1; k <= n; ++k) {
    std::vector<unsigned> idx(2 * k);
    for (unsigned i = 0; i < 2 * k; ++i) idx[i] = i;
    out.push_back(pfaff(f, submatrix(m, idx, idx)) == 1 ? 1 : -1);
  }
  return out;
}

}  // namespace

SkewEmbedding skew_symmetrize(const PolyMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("skew_symmetrize expects a square matrix");
  unsigned n = a.rows();
  PolyMatrix m(a.field(), 2 * n, 2 * n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      m.at(2 * i, 2 * j + 1) = a.at(i, j);
      m.at(2 * j + 1, 2 * i) = -a.at(i, j);
    }
  return {m, skew_signs(a.field(), n)};
}

AffineSkewEmbedding skew_symmetrize(const PrimeField& f, const AffineMatrix& a) {
  if (a.rows != a.cols) throw InvalidArgument("skew_symmetrize expects a square matrix");
  unsigned n = a.rows;
  AffineMatrix m(2 * n, 2 * n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      m.at(2 * i, 2 * j + 1) = a.at(i, j);
      m.at(2 * j + 1, 2 * i) = scaled(f, a.at(i, j), f.neg(1));
    }
  return {m, skew_signs(f, n)};
}

}  // namespace idealred
