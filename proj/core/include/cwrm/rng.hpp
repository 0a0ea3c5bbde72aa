#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cwrm {

// Deterministic random stream addressed by (seed, stream). Distinct stream
// indices give decorrelated sequences from the same user seed, which is what
// makes multi-start results independent of the number of worker threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double normal();                         // standard normal
  double normal(double mean, double sd);
  int uniform_int(int lo, int hi);         // inclusive bounds

  // k distinct indices from {0,...,n-1}, order as drawn.
  std::vector<int> sample_without_replacement(int n, int k);

  // Uniform draw from the probability simplex (normalized exponentials).
  Eigen::VectorXd simplex(int k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cwrm
