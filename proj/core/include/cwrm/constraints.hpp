#pragma once

#include <utility>
#include <vector>

#include "cwrm/types.hpp"

namespace cwrm {

// Pooled eigenvalues or variances to be truncated jointly: value j enters
// the objective with weight w_j (a component weight, repeated d times per
// component in the eigenvalue case), under ratio bound c.
struct WeightedValues {
  std::vector<double> values;
  std::vector<double> weights;
  double c = 1.0;
};

// Two-sided clamp of e into [m, c*m].
double truncate(double e, double m, double c);

// sum_j w_j * (log t_j + v_j / t_j) with t_j = truncate(v_j, m, c).
// The function of m whose minimizer gives the optimal clamp level.
double truncation_objective(const WeightedValues& wv, double m);

// Global minimizer of truncation_objective. The breakpoints {v_j, v_j/c}
// split the line into intervals on which the clamp pattern is constant;
// each interval's stationary point has a closed form and is clamped into
// the interval, all breakpoints plus the weighted mean are also candidates,
// and the best candidate wins (smallest m on ties). Throws DegenerateValues
// when no positive threshold exists (all values zero).
double optimal_threshold(const WeightedValues& wv);

// Enforces the eigenvalue-ratio bound across all G*d eigenvalues jointly:
// eigendecompose each scatter, pool eigenvalues weighted by the component
// weights, find the optimal clamp level, rebuild each matrix from clamped
// eigenvalues. Zero-weight components do not influence the level but are
// still clamped. Inputs already satisfying the bound (with strictly
// positive eigenvalues) are returned unchanged.
std::vector<MatrixXd> constrain_scatters(const std::vector<MatrixXd>& t,
                                         const VectorXd& weights, double c_x);

// Same scheme for the G regression noise variances.
VectorXd constrain_variances(const VectorXd& s2, const VectorXd& weights,
                             double c_eps);

// Symmetric eigendecomposition with eigenvalues sorted descending and
// eigenvectors as rows, so A = U' * diag(lambda) * U. Throws NotSymmetric
// when A is visibly asymmetric and NoConvergence on solver failure.
std::pair<VectorXd, MatrixXd> sym_eigen(const MatrixXd& a);

}  // namespace cwrm
