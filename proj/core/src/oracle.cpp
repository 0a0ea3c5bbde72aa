#include "cwrm/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace cwrm::oracle {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int subset_size(int n, double alpha) {
  return static_cast<int>(std::floor(n * (1.0 - alpha) + 1e-9));
}

std::vector<int> mask_indices(std::uint32_t mask, int n) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) idx.push_back(i);
  }
  return idx;
}

}  // namespace

SubsetResult exhaustive_trimmed_cwm_g1(const Dataset& dataset, double alpha) {
  const int n = dataset.n();
  if (n > 16) {
    throw Error(ErrorCode::TooLarge, "exhaustive search capped at n = 16");
  }
  if (dataset.d() != 1) {
    throw Error(ErrorCode::BadConfig, "single-covariate oracle only");
  }
  const int h = subset_size(n, alpha);

  SubsetResult best;
  best.objective = kNegInf;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != h) continue;
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sx += dataset.x(i, 0);
        sy += dataset.y[i];
      }
    }
    const double mx = sx / h;
    const double my = sy / h;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        const double dx = dataset.x(i, 0) - mx;
        const double dy = dataset.y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
      }
    }
    const double vx = sxx / h;  // maximum-likelihood variance of x
    if (!(vx > 0.0)) continue;  // degenerate scale, infeasible subset
    const double slope = sxy / sxx;
    const double s2 = (syy - slope * sxy) / h;  // mean squared residual
    if (!(s2 > 0.0)) continue;
    // With ML plug-ins both Gaussian terms collapse to -h/2 (log(2 pi v) + 1).
    const double objective =
        -h * (kLog2Pi + 0.5 * std::log(vx) + 0.5 * std::log(s2) + 1.0);
    if (objective > best.objective) {
      best.objective = objective;
      best.retained = mask_indices(mask, n);
    }
  }
  return best;
}

SubsetResult exhaustive_lts(const Dataset& dataset, double alpha) {
  const int n = dataset.n();
  if (n > 16) {
    throw Error(ErrorCode::TooLarge, "exhaustive search capped at n = 16");
  }
  const int d = dataset.d();
  const int h = subset_size(n, alpha);

  SubsetResult best;
  best.objective = kNegInf;
  double best_rss = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd design(h, d + 1);
  Eigen::VectorXd response(h);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != h) continue;
    int row = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        design(row, 0) = 1.0;
        design.row(row).tail(d) = dataset.x.row(i);
        response[row] = dataset.y[i];
        ++row;
      }
    }
    const Eigen::VectorXd coef =
        design.colPivHouseholderQr().solve(response);
    const double rss = (response - design * coef).squaredNorm();
    if (rss < best_rss) {
      best_rss = rss;
      best.retained = mask_indices(mask, n);
    }
  }
  const double s2 = best_rss / h;
  best.objective = s2 > 0.0
                       ? -0.5 * h * (kLog2Pi + std::log(s2) + 1.0)
                       : std::numeric_limits<double>::infinity();
  return best;
}

ThresholdResult grid_threshold(const WeightedValues& wv, int n_grid) {
  if (n_grid < 1000) {
    throw Error(ErrorCode::BadConfig, "grid needs at least 1000 points");
  }
  double min_bp = std::numeric_limits<double>::infinity();
  double max_bp = 0.0;
  for (double v : wv.values) {
    if (v <= 0.0) continue;
    min_bp = std::min(min_bp, v / wv.c);
    max_bp = std::max(max_bp, v);
  }
  if (!(max_bp > 0.0)) {
    throw Error(ErrorCode::DegenerateValues, "no positive values to scan");
  }
  const double lo = std::log(min_bp / 10.0);
  const double hi = std::log(max_bp * 10.0);
  ThresholdResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_grid; ++i) {
    const double m = std::exp(lo + (hi - lo) * i / (n_grid - 1));
    double obj = 0.0;
    for (std::size_t j = 0; j < wv.values.size(); ++j) {
      const double t =
          std::min(wv.c * m, std::max(wv.values[j], m));
      obj += wv.weights[j] * (std::log(t) + wv.values[j] / t);
    }
    if (obj < best.objective) {
      best.objective = obj;
      best.m = m;
    }
  }
  return best;
}

}  // namespace cwrm::oracle
