#pragma once

#include <vector>

#include "cwrm/rng.hpp"
#include "cwrm/types.hpp"

namespace cwrm {

struct RegressionFit {
  double intercept = 0.0;
  VectorXd slope;
  double mean_sq_resid = 0.0;
};

// Per-iteration bookkeeping exposed for diagnostics: the objective after
// the C-step, whether a component redraw interrupted the usual update, and
// how close the parameters sit to the constraint boundaries.
struct IterationStats {
  double objective = 0.0;
  bool redrew = false;
  double eig_ratio = 1.0;       // max/min eigenvalue over all scatters
  double var_ratio = 1.0;       // max/min noise variance
  double spherical_dev = 0.0;   // max_g max_ij |Sigma_g - a*I|, pooled a
  double var_dev = 0.0;         // max_g |sigma_g^2 - mean variance|
};

struct StartTrace {
  int start_index = -1;
  bool failed = false;
  std::vector<IterationStats> iterations;
};

struct FitDiagnostics {
  std::vector<StartTrace> starts;
};

// Random-subsample initialization: d+2 distinct rows per component give the
// component's covariate moments and regression, weights are drawn uniformly
// on the simplex, and the constraint pass is applied when the raw draws are
// infeasible.
ModelParams initialize(const Dataset& dataset, const FitConfig& config,
                       RngStream& rng);

// E-step plus concentration step: rank rows by mixture log-density, retain
// the floor(n*(1-alpha)) best (ties keep the smaller index), and fill
// posterior rows for the retained points only.
Responsibilities e_and_c_step(const Dataset& dataset,
                              const ModelParams& params, double alpha);

// Weighted least squares of y on x with weights tau_col; singular designs
// get the minimum-norm solution through a spectral pseudo-inverse.
RegressionFit weighted_regression(const Dataset& dataset,
                                  const VectorXd& tau_col);

// Constrained M-step: closed-form weighted updates for weights, means,
// scatters and regressions, then the ratio constraints on scatters and
// noise variances. Throws EmptyComponentError when a component's posterior
// mass vanishes (the fit driver redraws such components).
ModelParams m_step(const Dataset& dataset, const Responsibilities& resp,
                   const FitConfig& config);

// Trimmed log-likelihood: sum of mixture log-densities over retained rows.
double trimmed_loglik(const Dataset& dataset, const ModelParams& params,
                      const std::vector<int>& z);

// One full EM run from one random initialization. Starving components are
// redrawn from fresh subsamples up to 5 times each; a start that cannot be
// repaired is reported with objective -inf instead of throwing.
TrimmedFit fit_once(const Dataset& dataset, const FitConfig& config,
                    RngStream& rng, StartTrace* trace = nullptr);

// Multi-start driver: n_starts independent runs on per-start random
// streams, executed on a worker pool (size from CWRM_THREADS when set,
// capped by n_threads > 0 if given), best objective wins with ties going
// to the smallest start index. Throws AllStartsFailed if no start
// produced a finite objective.
TrimmedFit fit(const Dataset& dataset, const FitConfig& config,
               FitDiagnostics* diagnostics = nullptr, int n_threads = 0);

}  // namespace cwrm
