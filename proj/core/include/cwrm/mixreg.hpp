#pragma once

#include <vector>

#include "cwrm/em.hpp"
#include "cwrm/types.hpp"

namespace cwrm {

// Mixture-of-regressions parameters: the covariate distribution is ignored,
// only the conditional y | x structure is modeled.
struct MixRegParams {
  VectorXd weights;
  VectorXd intercepts;
  std::vector<VectorXd> slopes;
  VectorXd noise_vars;

  [[nodiscard]] int n_groups() const {
    return static_cast<int>(weights.size());
  }
};

struct MixRegFit {
  MixRegParams params;
  Responsibilities resp;
  std::vector<int> labels;
  double objective = 0.0;
  int n_iter = 0;
  bool converged = false;
  int start_index = -1;
};

// n x G matrix of log(pi_g) + log N(y_i; b_g'x_i + b0_g, sigma_g^2); the
// trimming baseline ranks rows by this matrix alone, which is exactly why
// it cannot see leverage outliers that sit close to a fitted line.
MatrixXd mixreg_log_density_matrix(const Dataset& dataset,
                                   const MixRegParams& params);

// Trimmed mixture of regressions under the noise-variance ratio bound:
// same multi-start E/C/M scheme as the full model with the covariate
// density dropped and only constrain_variances applied (c_x is ignored).
// With G=1 and alpha > 0 this is least trimmed squares.
MixRegFit fit_trimmed_mixreg(const Dataset& dataset, const FitConfig& config,
                             FitDiagnostics* diagnostics = nullptr,
                             int n_threads = 0);

}  // namespace cwrm
