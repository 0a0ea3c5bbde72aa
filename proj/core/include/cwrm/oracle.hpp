#pragma once

#include <vector>

#include "cwrm/constraints.hpp"
#include "cwrm/types.hpp"

namespace cwrm::oracle {

// Brute-force references for the acceptance suite. Everything here is
// written against the mathematical definitions directly and shares no code
// with the modules it checks beyond the Dataset container.

struct SubsetResult {
  double objective = 0.0;
  std::vector<int> retained;  // sorted indices of the best subset
};

struct ThresholdResult {
  double objective = 0.0;
  double m = 0.0;
};

// Exhaustive trimmed maximum likelihood for the single-component model with
// one covariate: every size-h subset is scored with closed-form ML (sample
// moments of x, least squares of y on x). Subsets with zero x-variance or
// zero residual variance are infeasible, mirroring the constraint module's
// refusal to produce a degenerate scale, and score -inf.
// Throws TooLarge for n > 16, BadConfig for d != 1.
SubsetResult exhaustive_trimmed_cwm_g1(const Dataset& dataset, double alpha);

// Exhaustive least trimmed squares: minimal residual sum of squares over
// all size-h subsets, reported with the Gaussian log-likelihood of the best
// subset (+inf when the best subset fits exactly). Throws TooLarge.
SubsetResult exhaustive_lts(const Dataset& dataset, double alpha);

// Minimum of the truncation objective on a log-spaced grid spanning
// [min breakpoint / 10, max breakpoint * 10].
ThresholdResult grid_threshold(const WeightedValues& wv, int n_grid);

}  // namespace cwrm::oracle
