#include "cwrm/mixreg.hpp"

#include <cmath>
#include <string>

#include "cwrm/constraints.hpp"
#include "trimmed_detail.hpp"

namespace cwrm {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Keeps an exact-fit component evaluable: with G = 1 the ratio constraint
// cannot stop the residual variance from reaching zero (that is the least
// trimmed squares limit), and log(0) would poison the density matrix.
constexpr double kVarianceFloor = 1e-300;

RegressionFit subsample_regression(const Dataset& dataset,
                                   const std::vector<int>& idx) {
  VectorXd indicator = VectorXd::Zero(dataset.n());
  for (int i : idx) indicator[i] = 1.0;
  return weighted_regression(dataset, indicator);
}

struct MixRegModel {
  using Params = MixRegParams;
  using Fit = MixRegFit;

  const Dataset& dataset;
  const FitConfig& config;

  Params init(RngStream& rng) const {
    const int n = dataset.n();
    const int d = dataset.d();
    const int g_count = config.n_groups;
    const int per = d + 2;
    const std::vector<int> pooled =
        rng.sample_without_replacement(n, g_count * per);
    Params params;
    params.weights = VectorXd::Zero(g_count);
    params.intercepts = VectorXd::Zero(g_count);
    params.slopes.resize(g_count);
    params.noise_vars = VectorXd::Zero(g_count);
    for (int g = 0; g < g_count; ++g) {
      const std::vector<int> idx(pooled.begin() + g * per,
                                 pooled.begin() + (g + 1) * per);
      const RegressionFit reg = subsample_regression(dataset, idx);
      params.intercepts[g] = reg.intercept;
      params.slopes[g] = reg.slope;
      params.noise_vars[g] = std::max(reg.mean_sq_resid, kVarianceFloor);
    }
    params.weights = rng.simplex(g_count);
    params.noise_vars =
        constrain_variances(params.noise_vars, params.weights, config.c_eps);
    return params;
  }

  MatrixXd log_matrix(const Params& params) const {
    return mixreg_log_density_matrix(dataset, params);
  }

  Params m_step(const Responsibilities& resp) const {
    const int g_count = static_cast<int>(resp.tau.cols());
    const double h = resp.retained();
    std::vector<int> empty;
    for (int g = 0; g < g_count; ++g) {
      if (resp.tau.col(g).sum() < 1e-10 * h) empty.push_back(g);
    }
    if (!empty.empty()) {
      std::string which;
      for (int g : empty) which += " " + std::to_string(g + 1);
      throw EmptyComponentError(empty, "components without mass:" + which);
    }
    Params params;
    params.weights = VectorXd::Zero(g_count);
    params.intercepts = VectorXd::Zero(g_count);
    params.slopes.resize(g_count);
    params.noise_vars = VectorXd::Zero(g_count);
    for (int g = 0; g < g_count; ++g) {
      const VectorXd tau_col = resp.tau.col(g);
      params.weights[g] = tau_col.sum() / h;
      const RegressionFit reg = weighted_regression(dataset, tau_col);
      params.intercepts[g] = reg.intercept;
      params.slopes[g] = reg.slope;
      params.noise_vars[g] = std::max(reg.mean_sq_resid, kVarianceFloor);
    }
    params.noise_vars =
        constrain_variances(params.noise_vars, params.weights, config.c_eps);
    return params;
  }

  void redraw(Params& params, const std::vector<int>& components,
              RngStream& rng) const {
    const int g_count = config.n_groups;
    for (int g : components) {
      const auto idx =
          rng.sample_without_replacement(dataset.n(), dataset.d() + 2);
      const RegressionFit reg = subsample_regression(dataset, idx);
      params.intercepts[g] = reg.intercept;
      params.slopes[g] = reg.slope;
      params.noise_vars[g] = std::max(reg.mean_sq_resid, kVarianceFloor);
      params.weights[g] = 1.0 / g_count;
    }
    params.weights /= params.weights.sum();
    params.noise_vars =
        constrain_variances(params.noise_vars, params.weights, config.c_eps);
  }

  void fill_stats(const Params& params, IterationStats& stats) const {
    const double min_v = params.noise_vars.minCoeff();
    const double max_v = params.noise_vars.maxCoeff();
    stats.var_ratio = min_v > 0.0 ? max_v / min_v
                                  : std::numeric_limits<double>::infinity();
    const double mean_v = params.noise_vars.mean();
    stats.var_dev = (params.noise_vars.array() - mean_v).abs().maxCoeff();
  }
};

}  // namespace

MatrixXd mixreg_log_density_matrix(const Dataset& dataset,
                                   const MixRegParams& params) {
  const int n = dataset.n();
  const int g_count = params.n_groups();
  MatrixXd logs(n, g_count);
  for (int g = 0; g < g_count; ++g) {
    const double s2 = params.noise_vars[g];
    if (!(s2 > 0.0)) {
      throw Error(ErrorCode::NonPositiveVariance,
                  "noise variance of component " + std::to_string(g + 1) +
                      " is not positive");
    }
    const double log_norm = -0.5 * (kLog2Pi + std::log(s2));
    const double log_weight =
        params.weights[g] > 0.0
            ? std::log(params.weights[g])
            : -std::numeric_limits<double>::infinity();
    const VectorXd pred = (dataset.x * params.slopes[g]).array() +
                          params.intercepts[g];
    for (int i = 0; i < n; ++i) {
      const double r = dataset.y[i] - pred[i];
      logs(i, g) = log_weight + log_norm - r * r / (2.0 * s2);
    }
  }
  return logs;
}

MixRegFit fit_trimmed_mixreg(const Dataset& dataset, const FitConfig& config,
                             FitDiagnostics* diagnostics, int n_threads) {
  validate_dataset(dataset, config);
  const MixRegModel model{dataset, config};
  return detail::multi_start_em(model, dataset, config, diagnostics,
                                n_threads);
}

}  // namespace cwrm
