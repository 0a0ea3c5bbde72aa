#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "cwrm/types.hpp"

namespace cwrm {

// Per-component precomputation for density evaluation: Cholesky factor of
// the scatter, its log-determinant, and the logs of noise variance and
// mixing weight. Construction fails on a non-SPD scatter instead of
// jittering, since the constraint step is supposed to keep eigenvalues
// strictly positive; a failure here means an upstream bug.
struct ComponentCache {
  struct Entry {
    Eigen::LLT<MatrixXd> llt;
    double log_det = 0.0;     // log |Sigma_g|
    double log_noise = 0.0;   // log sigma_g^2
    double log_weight = 0.0;  // log pi_g, -inf when pi_g = 0
  };

  std::vector<Entry> entries;

  static ComponentCache build(const ModelParams& params);
};

// log N(v; mean, var) for scalar v. Throws on var <= 0.
double log_gauss_uni(double v, double mean, double var);

// log N_d(x; mu, Sigma) with the Mahalanobis term computed through the
// cached factorization, never an explicit inverse.
double log_gauss_multi(const VectorXd& x, const VectorXd& mu,
                       const ComponentCache::Entry& entry);

// Permutation-stable log(sum_j exp(v_j)): accumulates the non-maximal terms
// in descending order so the result is bitwise identical under reordering.
double log_sum_exp(std::span<const double> values);

// log of pi_g * N(y; b_g'x + b0_g, sigma_g^2) * N_d(x; mu_g, Sigma_g).
// Returns -inf when pi_g = 0.
double component_log_density(const VectorXd& x, double y,
                             const ModelParams& params,
                             const ComponentCache& cache, int g);

// log of the full mixture density at (x, y).
double mixture_log_density(const VectorXd& x, double y,
                           const ModelParams& params,
                           const ComponentCache& cache);

// Posterior component probabilities at (x, y), normalized in log space.
// Throws DegenerateDensity when every component log-density is -inf.
VectorXd posteriors(const VectorXd& x, double y, const ModelParams& params,
                    const ComponentCache& cache);

// n x G matrix of component log-densities for the whole dataset; the row
// log-sum-exp is the mixture log-density of that observation.
MatrixXd component_log_density_matrix(const Dataset& dataset,
                                      const ModelParams& params,
                                      const ComponentCache& cache);

}  // namespace cwrm
