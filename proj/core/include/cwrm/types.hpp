#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cwrm/errors.hpp"

namespace cwrm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Regression dataset with covariate rows X, responses y and an optional
// ground-truth label per row (0 = contamination, 1..G = generating component).
struct Dataset {
  MatrixXd x;  // n x d
  VectorXd y;  // n
  std::vector<int> true_labels;  // empty, or length n

  [[nodiscard]] int n() const { return static_cast<int>(x.rows()); }
  [[nodiscard]] int d() const { return static_cast<int>(x.cols()); }
};

struct FitConfig {
  int n_groups = 2;
  double alpha = 0.0;        // trimming level, fraction of rows discarded
  double c_x = 1e3;          // eigenvalue ratio bound for covariate scatters
  double c_eps = 1e3;        // ratio bound for regression noise variances
  int n_starts = 64;
  int max_iter = 200;
  double rel_tol = 1e-8;
  std::uint64_t seed = 0;
};

// Mixture parameters of the linear Gaussian cluster weighted model: each
// component carries a covariate Gaussian (mean, scatter) and a linear
// regression (slope, intercept, noise variance) plus a mixing weight.
struct ModelParams {
  VectorXd weights;                // G
  std::vector<VectorXd> means;     // G of d
  std::vector<MatrixXd> scatters;  // G of d x d, symmetric positive definite
  VectorXd intercepts;             // G
  std::vector<VectorXd> slopes;    // G of d
  VectorXd noise_vars;             // G

  [[nodiscard]] int n_groups() const {
    return static_cast<int>(weights.size());
  }
};

// Hard trimming indicator plus posterior weights for the retained rows.
// Rows with z = 0 carry an all-zero tau row; retained rows sum to one.
struct Responsibilities {
  MatrixXd tau;        // n x G
  std::vector<int> z;  // n, 0 or 1

  [[nodiscard]] int retained() const;
};

struct TrimmedFit {
  ModelParams params;
  Responsibilities resp;
  std::vector<int> labels;  // n, 0 = trimmed, else 1..G
  double objective = 0.0;
  int n_iter = 0;
  bool converged = false;
  int start_index = -1;
};

// Number of rows kept when trimming at level alpha: floor(n*(1-alpha)).
// A 1e-9 nudge compensates representation error in n*(1-alpha), which can
// land a hair below an exact integer (n=10, alpha=0.3 gives 6.9999...96).
int retained_count(int n, double alpha);

// Checks dataset and configuration shape: finite entries, label length,
// parameter ranges, and that floor(n*(1-alpha)) >= G*(d+2) so every
// component can be initialized from d+2 retained rows.
// Throws Error with NonFinite, LengthMismatch, BadConfig or TooFewPoints.
void validate_dataset(const Dataset& dataset, const FitConfig& config);

// MAP labels from responsibilities: 0 for trimmed rows, otherwise the
// 1-based index of the largest posterior (ties go to the smallest index).
std::vector<int> map_classify(const Responsibilities& resp);

}  // namespace cwrm
