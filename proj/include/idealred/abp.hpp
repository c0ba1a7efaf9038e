#pragma once

#include <unordered_map>
#include <vector>

#include "idealred/circuit.hpp"
#include "idealred/linalg.hpp"

namespace idealred {

struct AbpEdge {
  unsigned layer;  // target layer, 1..d; the source node lives in layer-1
  unsigned from;
  unsigned to;
  AffineForm label;
};

// Layered branching program; layer 0 holds the source, the last layer the sink.
class ABP {
 public:
  ABP(const PrimeField& f, std::vector<unsigned> layer_sizes, std::vector<AbpEdge> edges);

  const PrimeField& field() const noexcept { return field_; }
  const std::vector<unsigned>& layer_sizes() const noexcept { return layers_; }
  const std::vector<AbpEdge>& edges() const noexcept { return edges_; }
  unsigned depth() const noexcept { return static_cast<unsigned>(layers_.size() - 1); }
  unsigned vertex_count() const noexcept;
  std::vector<VariableId> variables() const;

  u64 eval(const std::unordered_map<VariableId, u64>& point) const;
  SparsePolynomial to_polynomial() const;

 private:
  PrimeField field_;
  std::vector<unsigned> layers_;
  std::vector<AbpEdge> edges_;
};

// Every label c + l(y) becomes l(y) + c*z; throws InvalidArgument if z already occurs.
ABP homogenize_abp(const ABP& a, VariableId z);

// Matrix of affine forms (the embeddings below keep entries affine).
struct AffineMatrix {
  unsigned rows = 0;
  unsigned cols = 0;
  std::vector<AffineForm> e;
  AffineMatrix(unsigned r, unsigned c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c) {}
  AffineForm& at(unsigned i, unsigned j) { return e[static_cast<std::size_t>(i) * cols + j]; }
  const AffineForm& at(unsigned i, unsigned j) const { return e[static_cast<std::size_t>(i) * cols + j]; }
  PolyMatrix to_poly(const PrimeField& f) const;
  FpMatrix eval(const PrimeField& f, const std::unordered_map<VariableId, u64>& point) const;
};

// r x r matrix with det = 1 + g and every leading k x k minor (k < r) equal to 1.
// Vertices are placed in topological order (source first, sink last, padding
// before the sink); entries are 1 on the diagonal, minus the edge label above it,
// and 1 in the (sink, source) corner. Throws InvalidArgument if r is too small.
AffineMatrix valiant_embed(const ABP& a, unsigned r);

// n x m matrix with A in the top-left block and 1 on the remaining diagonal.
AffineMatrix extend_to_ambient(const AffineMatrix& a, unsigned n, unsigned m);
PolyMatrix extend_to_ambient(const PolyMatrix& a, unsigned n, unsigned m);

// det_t over u(i,j), clow-sequence construction with dead states pruned.
ABP mv_det_abp(const PrimeField& f, unsigned t);
// (1,1) entry of Y_1 ... Y_len over u(k,i,j), each Y_k a dim x dim matrix.
// Vertex count (len-1)*dim + 2.
ABP imm_abp(const PrimeField& f, unsigned len, unsigned dim);
// pfaff_t over u(i,j) (i<j): states are sets of matched indices, each step pairs
// the smallest free index. t even, t <= 6.
inline constexpr unsigned kPfaffAbpCap = 6;
ABP pfaff_abp(const PrimeField& f, unsigned t);

// 2n x 2n skew matrix M with M(2i-1, 2j) = A(i,j) and M(2j, 2i-1) = -A(i,j) (1-based),
// so that pfaff of the leading 2k block equals sign[k-1] * det of the leading k block.
struct SkewEmbedding {
  PolyMatrix matrix;
  std::vector<int> sign;
};
SkewEmbedding skew_symmetrize(const PolyMatrix& a);
struct AffineSkewEmbedding {
  AffineMatrix matrix;
  std::vector<int> sign;
};
AffineSkewEmbedding skew_symmetrize(const PrimeField& f, const AffineMatrix& a);

}  // namespace idealred
