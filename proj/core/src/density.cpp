#include "cwrm/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cwrm {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ComponentCache ComponentCache::build(const ModelParams& params) {
  const int g_count = params.n_groups();
  ComponentCache cache;
  cache.entries.resize(g_count);
  for (int g = 0; g < g_count; ++g) {
    Entry& entry = cache.entries[g];
    entry.llt.compute(params.scatters[g]);
    if (entry.llt.info() != Eigen::Success) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "scatter of component " + std::to_string(g + 1) +
                      " is not positive definite");
    }
    const auto& l = entry.llt.matrixLLT();
    entry.log_det = 0.0;
    for (int j = 0; j < l.rows(); ++j) {
      entry.log_det += 2.0 * std::log(l(j, j));
    }
    const double s2 = params.noise_vars[g];
    if (!(s2 > 0.0)) {
      throw Error(ErrorCode::NonPositiveVariance,
                  "noise variance of component " + std::to_string(g + 1) +
                      " is not positive");
    }
    entry.log_noise = std::log(s2);
    const double w = params.weights[g];
    entry.log_weight = w > 0.0 ? std::log(w) : kNegInf;
  }
  return cache;
}

double log_gauss_uni(double v, double mean, double var) {
  if (!(var > 0.0)) {
    throw Error(ErrorCode::NonPositiveVariance,
                "variance must be positive, got " + std::to_string(var));
  }
  const double r = v - mean;
  return -0.5 * (kLog2Pi + std::log(var)) - r * r / (2.0 * var);
}

double log_gauss_multi(const VectorXd& x, const VectorXd& mu,
                       const ComponentCache::Entry& entry) {
  const int d = static_cast<int>(x.size());
  const VectorXd diff = x - mu;
  // Mahalanobis distance through the Cholesky factor: solve L u = diff.
  const double quad =
      entry.llt.matrixL().solve(diff).squaredNorm();
  return -0.5 * (d * kLog2Pi + entry.log_det + quad);
}

double log_sum_exp(std::span<const double> values) {
  const std::size_t k = values.size();
  if (k == 0) return kNegInf;
  if (k == 1) return values[0];
  double scratch[16];
  std::vector<double> heap;
  double* buf = scratch;
  if (k > 16) {
    heap.assign(values.begin(), values.end());
    buf = heap.data();
  } else {
    std::copy(values.begin(), values.end(), scratch);
  }
  // Descending order makes the accumulation independent of input order,
  // so permuting components never changes the result bitwise.
  std::sort(buf, buf + k, std::greater<double>());
  const double top = buf[0];
  if (top == kNegInf) return kNegInf;
  double tail = 0.0;
  for (std::size_t j = k; j-- > 1;) {
    tail += std::exp(buf[j] - top);
  }
  return top + std::log1p(tail);
}

double component_log_density(const VectorXd& x, double y,
                             const ModelParams& params,
                             const ComponentCache& cache, int g) {
  const ComponentCache::Entry& entry = cache.entries[g];
  if (entry.log_weight == kNegInf) return kNegInf;
  const double pred = params.slopes[g].dot(x) + params.intercepts[g];
  const double r = y - pred;
  const double log_y =
      -0.5 * (kLog2Pi + entry.log_noise) -
      r * r / (2.0 * params.noise_vars[g]);
  return entry.log_weight + log_y + log_gauss_multi(x, params.means[g], entry);
}

double mixture_log_density(const VectorXd& x, double y,
                           const ModelParams& params,
                           const ComponentCache& cache) {
  const int g_count = params.n_groups();
  double comps[16];
  std::vector<double> heap;
  double* buf = comps;
  if (g_count > 16) {
    heap.resize(g_count);
    buf = heap.data();
  }
  for (int g = 0; g < g_count; ++g) {
    buf[g] = component_log_density(x, y, params, cache, g);
  }
  return log_sum_exp(std::span<const double>(buf, g_count));
}

VectorXd posteriors(const VectorXd& x, double y, const ModelParams& params,
                    const ComponentCache& cache) {
  const int g_count = params.n_groups();
  VectorXd logs(g_count);
  for (int g = 0; g < g_count; ++g) {
    logs[g] = component_log_density(x, y, params, cache, g);
  }
  const double total =
      log_sum_exp(std::span<const double>(logs.data(), g_count));
  if (total == kNegInf) {
    throw Error(ErrorCode::DegenerateDensity,
                "all component densities vanished at an observation");
  }
  VectorXd post(g_count);
  for (int g = 0; g < g_count; ++g) {
    post[g] = std::exp(logs[g] - total);
  }
  return post / post.sum();
}

MatrixXd component_log_density_matrix(const Dataset& dataset,
                                      const ModelParams& params,
                                      const ComponentCache& cache) {
  const int n = dataset.n();
  const int g_count = params.n_groups();
  MatrixXd logs(n, g_count);
  VectorXd x(dataset.d());
  for (int i = 0; i < n; ++i) {
    x = dataset.x.row(i).transpose();
    for (int g = 0; g < g_count; ++g) {
      logs(i, g) = component_log_density(x, dataset.y[i], params, cache, g);
    }
  }
  return logs;
}

}  // namespace cwrm
