#include "cwrm/rng.hpp"

#include <cmath>
#include <numeric>

namespace cwrm {

namespace {

// splitmix64 finalizer; mixes the (seed, stream) pair into engine state so
// that neighbouring stream indices give unrelated sequences.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix64(mix64(seed) ^ mix64(stream ^ 0xD1B54A32D192ED03ULL))) {}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::normal(double mean, double sd) {
  return mean + sd * normal();
}

int RngStream::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

std::vector<int> RngStream::sample_without_replacement(int n, int k) {
  // Partial Fisher-Yates over an index array.
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out(k);
  for (int j = 0; j < k; ++j) {
    const int pick = uniform_int(j, n - 1);
    std::swap(pool[j], pool[pick]);
    out[j] = pool[j];
  }
  return out;
}

Eigen::VectorXd RngStream::simplex(int k) {
  Eigen::VectorXd w(k);
  for (int j = 0; j < k; ++j) {
    w[j] = -std::log(1.0 - uniform());
  }
  return w / w.sum();
}

}  // namespace cwrm
