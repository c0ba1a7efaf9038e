#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idealred/polynomial.hpp"

namespace idealred {

// Counter-based generator: stream k of seed s is fully determined by (s, k), so
// trials can be handed out in any order without perturbing each other.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}
  std::uint64_t next();
  // Uniform on {0, ..., hi}, by rejection.
  std::uint64_t uniform(std::uint64_t hi);
  SplitRng split(std::uint64_t k) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

struct IsolationWeights {
  std::vector<VariableId> vars;
  std::vector<std::uint64_t> z;  // parallel to vars, each in {0..M}
  unsigned K = 0;
  unsigned ell = 0;
  double eps = 0.5;
  std::uint64_t M = 0;
  std::uint64_t seed = 0;
  // Set by fold_v.
  std::uint64_t z_v = 0;
  std::uint64_t deg_v_bound = 0;
  std::uint64_t deg_w_bound = 0;
  std::uint64_t total_w_bound = 0;

  // w-exponent of a weighted variable, or z_v for v; throws InvalidArgument otherwise.
  std::uint64_t exponent(VariableId v) const;
};

// M = ceil(K * ell / eps); throws InvalidArgument unless 0 < eps < 1 and K, ell >= 1.
std::uint64_t isolation_range(unsigned K, unsigned ell, double eps);

IsolationWeights sample_weights(const std::vector<VariableId>& vars, unsigned K, double eps, std::uint64_t seed);

// z_v = deg_w_bound + 1 and total_w_bound = z_v * deg_v_bound + deg_w_bound.
IsolationWeights fold_v(IsolationWeights w, std::uint64_t deg_v_bound, std::uint64_t deg_w_bound);

// The sound default bound on deg_w of the weighted polynomial: ell * K * M.
std::uint64_t default_w_bound(const IsolationWeights& w);

// Image of p under t -> w^{z_t} (weighted variables) and v -> w^{z_v}; other variables stay.
SparsePolynomial apply_weights(const SparsePolynomial& p, const IsolationWeights& w);

struct IsolationStats {
  std::uint64_t M = 0;
  unsigned K = 0;
  unsigned ell = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double rate = 0;
  double bound = 0;  // eps + 3 sigma binomial margin
};

// Stress collections for the isolation statistics: "progression" (points on a line),
// "weight2" (all 0/1 vectors with two ones), "simplex" (all exponents of total degree size).
std::vector<std::vector<unsigned>> adversarial_collection(const std::string& name, unsigned size);
const std::vector<std::string>& adversarial_collection_names();

// Fraction of trials whose minimum weight over the collection is attained twice.
// K = 0 takes the largest coefficient of the collection (at least 1).
IsolationStats isolation_stats(const std::vector<std::vector<unsigned>>& collection, std::uint64_t trials, double eps,
                               std::uint64_t seed, unsigned K = 0);

}  // namespace idealred
