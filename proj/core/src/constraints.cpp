#include "cwrm/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace cwrm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ratio feasibility with a whisker of slack so that a set of values that
// was just truncated (and re-measured through a decomposition) still counts
// as feasible; keeps the operation idempotent.
bool ratio_feasible(double min_v, double max_v, double c) {
  return min_v > 0.0 && max_v <= c * min_v * (1.0 + 1e-10);
}

}  // namespace

double truncate(double e, double m, double c) {
  return std::min(c * m, std::max(e, m));
}

double truncation_objective(const WeightedValues& wv, double m) {
  double total = 0.0;
  for (std::size_t j = 0; j < wv.values.size(); ++j) {
    if (wv.weights[j] == 0.0) continue;
    const double t = truncate(wv.values[j], m, wv.c);
    total += wv.weights[j] * (std::log(t) + wv.values[j] / t);
  }
  return total;
}

double optimal_threshold(const WeightedValues& wv) {
  const std::size_t k = wv.values.size();
  const double c = wv.c;

  double weight_sum = 0.0;
  double weighted_value_sum = 0.0;
  std::vector<double> breakpoints;
  breakpoints.reserve(2 * k);
  for (std::size_t j = 0; j < k; ++j) {
    weight_sum += wv.weights[j];
    weighted_value_sum += wv.weights[j] * wv.values[j];
    if (wv.values[j] > 0.0) {
      breakpoints.push_back(wv.values[j]);
      breakpoints.push_back(wv.values[j] / c);
    }
  }
  if (breakpoints.empty() || weight_sum <= 0.0) {
    throw Error(ErrorCode::DegenerateValues,
                "no positive values to clamp against");
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  std::vector<double> candidates(breakpoints);
  // Always-valid fallback; with c = 1 it is the exact optimum.
  candidates.push_back(weighted_value_sum / weight_sum);

  // Stationary point of each interval on which the clamp pattern is
  // constant: values below the interval are floored (contribute w*v),
  // values above c*interval are capped (contribute w*v/c), interior values
  // drop out of the derivative.
  const std::size_t b_count = breakpoints.size();
  for (std::size_t interval = 0; interval <= b_count; ++interval) {
    const double lo = interval == 0 ? 0.0 : breakpoints[interval - 1];
    const double hi = interval == b_count ? kInf : breakpoints[interval];
    const double mid =
        interval == b_count ? 2.0 * breakpoints.back() : 0.5 * (lo + hi);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (wv.values[j] < mid) {
        num += wv.weights[j] * wv.values[j];
        den += wv.weights[j];
      } else if (wv.values[j] > c * mid) {
        num += wv.weights[j] * wv.values[j] / c;
        den += wv.weights[j];
      }
    }
    if (den <= 0.0) continue;
    double m = num / den;
    m = std::min(std::max(m, lo), hi);
    if (m > 0.0 && std::isfinite(m)) candidates.push_back(m);
  }

  std::sort(candidates.begin(), candidates.end());
  double best_m = 0.0;
  double best_obj = kInf;
  for (double m : candidates) {
    if (m <= 0.0) continue;
    const double obj = truncation_objective(wv, m);
    // Strict comparison over ascending candidates keeps the smallest
    // minimizer on ties.
    if (obj < best_obj) {
      best_obj = obj;
      best_m = m;
    }
  }
  return best_m;
}

std::vector<MatrixXd> constrain_scatters(const std::vector<MatrixXd>& t,
                                         const VectorXd& weights, double c_x) {
  const int g_count = static_cast<int>(t.size());
  if (weights.sum() <= 0.0) {
    throw Error(ErrorCode::ZeroWeights, "all component weights are zero");
  }

  std::vector<VectorXd> evals(g_count);
  std::vector<MatrixXd> evecs(g_count);
  double min_e = kInf;
  double max_e = -kInf;
  for (int g = 0; g < g_count; ++g) {
    auto [e, u] = sym_eigen(t[g]);
    min_e = std::min(min_e, e.minCoeff());
    max_e = std::max(max_e, e.maxCoeff());
    evals[g] = std::move(e);
    evecs[g] = std::move(u);
  }
  if (ratio_feasible(min_e, max_e, c_x)) {
    return t;
  }

  WeightedValues wv;
  wv.c = c_x;
  for (int g = 0; g < g_count; ++g) {
    if (weights[g] <= 0.0) continue;
    for (int l = 0; l < evals[g].size(); ++l) {
      wv.values.push_back(evals[g][l]);
      wv.weights.push_back(weights[g]);
    }
  }
  const double m_opt = optimal_threshold(wv);

  std::vector<MatrixXd> out(g_count);
  for (int g = 0; g < g_count; ++g) {
    VectorXd clamped = evals[g];
    for (int l = 0; l < clamped.size(); ++l) {
      clamped[l] = truncate(clamped[l], m_opt, c_x);
    }
    MatrixXd rebuilt =
        evecs[g].transpose() * clamped.asDiagonal() * evecs[g];
    out[g] = 0.5 * (rebuilt + rebuilt.transpose());
  }
  return out;
}

VectorXd constrain_variances(const VectorXd& s2, const VectorXd& weights,
                             double c_eps) {
  if (weights.sum() <= 0.0) {
    throw Error(ErrorCode::ZeroWeights, "all component weights are zero");
  }
  if (ratio_feasible(s2.minCoeff(), s2.maxCoeff(), c_eps)) {
    return s2;
  }
  WeightedValues wv;
  wv.c = c_eps;
  for (int g = 0; g < s2.size(); ++g) {
    if (weights[g] <= 0.0) continue;
    wv.values.push_back(s2[g]);
    wv.weights.push_back(weights[g]);
  }
  const double m_opt = optimal_threshold(wv);
  VectorXd out(s2.size());
  for (int g = 0; g < s2.size(); ++g) {
    out[g] = truncate(s2[g], m_opt, c_eps);
  }
  return out;
}

std::pair<VectorXd, MatrixXd> sym_eigen(const MatrixXd& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  }
  const MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence,
                "symmetric eigendecomposition failed");
  }
  const int d = static_cast<int>(a.rows());
  // Eigen returns ascending eigenvalues with eigenvectors as columns;
  // flip to descending and store eigenvectors as rows, A = U' diag(l) U.
  VectorXd values(d);
  MatrixXd u(d, d);
  for (int j = 0; j < d; ++j) {
    values[j] = solver.eigenvalues()[d - 1 - j];
    u.row(j) = solver.eigenvectors().col(d - 1 - j).transpose();
  }
  return {values, u};
}

}  // namespace cwrm
