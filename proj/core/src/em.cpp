#include "cwrm/em.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "cwrm/constraints.hpp"
#include "cwrm/density.hpp"
#include "trimmed_detail.hpp"

namespace cwrm {

namespace {

// Minimum-norm solution of the symmetric p.s.d. system a * x = b through a
// spectral pseudo-inverse; directions with negligible eigenvalues get a
// zero coefficient.
VectorXd pinv_solve(const MatrixXd& a, const VectorXd& b) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd& ev = es.eigenvalues();
  VectorXd out = VectorXd::Zero(a.rows());
  const double lmax = ev.cwiseAbs().maxCoeff();
  if (lmax <= 0.0) return out;
  const double tol = lmax * 1e-12;
  for (int j = 0; j < ev.size(); ++j) {
    if (ev[j] > tol) {
      out += (es.eigenvectors().col(j).dot(b) / ev[j]) *
             es.eigenvectors().col(j);
    }
  }
  return out;
}

struct SubsampleParams {
  VectorXd mean;
  MatrixXd cov;
  RegressionFit reg;
};

SubsampleParams component_from_subsample(const Dataset& dataset,
                                         const std::vector<int>& idx) {
  const int d = dataset.d();
  const int m = static_cast<int>(idx.size());
  SubsampleParams out;
  out.mean = VectorXd::Zero(d);
  for (int i : idx) out.mean += dataset.x.row(i).transpose();
  out.mean /= m;
  out.cov = MatrixXd::Zero(d, d);
  for (int i : idx) {
    const VectorXd diff = dataset.x.row(i).transpose() - out.mean;
    out.cov += diff * diff.transpose();
  }
  out.cov /= m;
  VectorXd indicator = VectorXd::Zero(dataset.n());
  for (int i : idx) indicator[i] = 1.0;
  out.reg = weighted_regression(dataset, indicator);
  return out;
}

void apply_constraints(ModelParams& params, const FitConfig& config) {
  params.scatters =
      constrain_scatters(params.scatters, params.weights, config.c_x);
  params.noise_vars =
      constrain_variances(params.noise_vars, params.weights, config.c_eps);
}

struct CwmModel {
  using Params = ModelParams;
  using Fit = TrimmedFit;

  const Dataset& dataset;
  const FitConfig& config;

  Params init(RngStream& rng) const {
    return initialize(dataset, config, rng);
  }

  MatrixXd log_matrix(const Params& params) const {
    const ComponentCache cache = ComponentCache::build(params);
    return component_log_density_matrix(dataset, params, cache);
  }

  Params m_step(const Responsibilities& resp) const {
    return cwrm::m_step(dataset, resp, config);
  }

  void redraw(Params& params, const std::vector<int>& components,
              RngStream& rng) const {
    const int g_count = config.n_groups;
    for (int g : components) {
      const auto idx =
          rng.sample_without_replacement(dataset.n(), dataset.d() + 2);
      const SubsampleParams sub = component_from_subsample(dataset, idx);
      params.means[g] = sub.mean;
      params.scatters[g] = sub.cov;
      params.intercepts[g] = sub.reg.intercept;
      params.slopes[g] = sub.reg.slope;
      params.noise_vars[g] = sub.reg.mean_sq_resid;
      params.weights[g] = 1.0 / g_count;
    }
    params.weights /= params.weights.sum();
    apply_constraints(params, config);
  }

  void fill_stats(const Params& params, IterationStats& stats) const {
    const int g_count = params.n_groups();
    const int d = dataset.d();
    double min_e = std::numeric_limits<double>::infinity();
    double max_e = -min_e;
    double trace_sum = 0.0;
    for (int g = 0; g < g_count; ++g) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(params.scatters[g],
                                                 Eigen::EigenvaluesOnly);
      min_e = std::min(min_e, es.eigenvalues().minCoeff());
      max_e = std::max(max_e, es.eigenvalues().maxCoeff());
      trace_sum += params.scatters[g].trace();
    }
    stats.eig_ratio = min_e > 0.0 ? max_e / min_e
                                  : std::numeric_limits<double>::infinity();
    const double a = trace_sum / (g_count * d);
    double dev = 0.0;
    for (int g = 0; g < g_count; ++g) {
      MatrixXd delta = params.scatters[g];
      delta.diagonal().array() -= a;
      dev = std::max(dev, delta.cwiseAbs().maxCoeff());
    }
    stats.spherical_dev = dev;
    const double min_v = params.noise_vars.minCoeff();
    const double max_v = params.noise_vars.maxCoeff();
    stats.var_ratio = min_v > 0.0 ? max_v / min_v
                                  : std::numeric_limits<double>::infinity();
    const double mean_v = params.noise_vars.mean();
    stats.var_dev =
        (params.noise_vars.array() - mean_v).abs().maxCoeff();
  }
};

}  // namespace

ModelParams initialize(const Dataset& dataset, const FitConfig& config,
                       RngStream& rng) {
  const int n = dataset.n();
  const int d = dataset.d();
  const int g_count = config.n_groups;
  const int per = d + 2;
  if (n < g_count * per) {
    throw Error(ErrorCode::TooFewPoints,
                "need " + std::to_string(g_count * per) +
                    " rows to initialize, have " + std::to_string(n));
  }
  // One pooled draw, chunked per component, so a small dataset is spread
  // over the components instead of re-used.
  const std::vector<int> pooled =
      rng.sample_without_replacement(n, g_count * per);

  ModelParams params;
  params.weights = VectorXd::Zero(g_count);
  params.means.resize(g_count);
  params.scatters.resize(g_count);
  params.intercepts = VectorXd::Zero(g_count);
  params.slopes.resize(g_count);
  params.noise_vars = VectorXd::Zero(g_count);
  for (int g = 0; g < g_count; ++g) {
    const std::vector<int> idx(pooled.begin() + g * per,
                               pooled.begin() + (g + 1) * per);
    const SubsampleParams sub = component_from_subsample(dataset, idx);
    params.means[g] = sub.mean;
    params.scatters[g] = sub.cov;
    params.intercepts[g] = sub.reg.intercept;
    params.slopes[g] = sub.reg.slope;
    params.noise_vars[g] = sub.reg.mean_sq_resid;
  }
  params.weights = rng.simplex(g_count);
  apply_constraints(params, config);
  return params;
}

Responsibilities e_and_c_step(const Dataset& dataset,
                              const ModelParams& params, double alpha) {
  const ComponentCache cache = ComponentCache::build(params);
  const MatrixXd logs = component_log_density_matrix(dataset, params, cache);
  const int h = retained_count(dataset.n(), alpha);
  return detail::concentrate(logs, h).resp;
}

RegressionFit weighted_regression(const Dataset& dataset,
                                  const VectorXd& tau_col) {
  const double weight_sum = tau_col.sum();
  if (!(weight_sum > 0.0)) {
    throw Error(ErrorCode::ZeroWeights, "regression weights sum to zero");
  }
  const VectorXd w = tau_col / weight_sum;
  const VectorXd mx = dataset.x.transpose() * w;
  const double my = dataset.y.dot(w);
  const MatrixXd xc = dataset.x.rowwise() - mx.transpose();
  const VectorXd yc = dataset.y.array() - my;
  const MatrixXd sxx = xc.transpose() * w.asDiagonal() * xc;
  const VectorXd sxy = xc.transpose() * w.cwiseProduct(yc);

  RegressionFit fit;
  fit.slope = pinv_solve(sxx, sxy);
  fit.intercept = my - fit.slope.dot(mx);
  const VectorXd resid = yc - xc * fit.slope;
  fit.mean_sq_resid = resid.cwiseAbs2().dot(w);
  return fit;
}

ModelParams m_step(const Dataset& dataset, const Responsibilities& resp,
                   const FitConfig& config) {
  const int g_count = static_cast<int>(resp.tau.cols());
  const int d = dataset.d();
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

  ModelParams params;
  params.weights = VectorXd::Zero(g_count);
  params.means.resize(g_count);
  params.intercepts = VectorXd::Zero(g_count);
  params.slopes.resize(g_count);
  params.noise_vars = VectorXd::Zero(g_count);
  std::vector<MatrixXd> moments(g_count);
  for (int g = 0; g < g_count; ++g) {
    const VectorXd tau_col = resp.tau.col(g);
    const double mass = tau_col.sum();
    params.weights[g] = mass / h;
    const VectorXd mu = dataset.x.transpose() * tau_col / mass;
    params.means[g] = mu;
    const MatrixXd xc = dataset.x.rowwise() - mu.transpose();
    moments[g] = xc.transpose() * (tau_col / mass).asDiagonal() * xc;
    const RegressionFit reg = weighted_regression(dataset, tau_col);
    params.intercepts[g] = reg.intercept;
    params.slopes[g] = reg.slope;
    params.noise_vars[g] = reg.mean_sq_resid;
  }
  params.scatters = constrain_scatters(moments, params.weights, config.c_x);
  params.noise_vars =
      constrain_variances(params.noise_vars, params.weights, config.c_eps);
  return params;
}

double trimmed_loglik(const Dataset& dataset, const ModelParams& params,
                      const std::vector<int>& z) {
  const ComponentCache cache = ComponentCache::build(params);
  double total = 0.0;
  VectorXd x(dataset.d());
  for (int i = 0; i < dataset.n(); ++i) {
    if (!z[i]) continue;
    x = dataset.x.row(i).transpose();
    total += mixture_log_density(x, dataset.y[i], params, cache);
  }
  return total;
}

TrimmedFit fit_once(const Dataset& dataset, const FitConfig& config,
                    RngStream& rng, StartTrace* trace) {
  validate_dataset(dataset, config);
  const CwmModel model{dataset, config};
  return detail::run_trimmed_em(model, dataset, config, rng, trace);
}

TrimmedFit fit(const Dataset& dataset, const FitConfig& config,
               FitDiagnostics* diagnostics, int n_threads) {
  validate_dataset(dataset, config);
  const CwmModel model{dataset, config};
  return detail::multi_start_em(model, dataset, config, diagnostics,
                                n_threads);
}

}  // namespace cwrm
