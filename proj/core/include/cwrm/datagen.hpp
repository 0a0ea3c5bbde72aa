#pragma once

#include <string>
#include <vector>

#include "cwrm/rng.hpp"
#include "cwrm/types.hpp"

namespace cwrm {

// One generating component: covariate Gaussian plus regression line.
struct ComponentSpec {
  double weight = 1.0;
  VectorXd mean;
  MatrixXd scatter;
  double intercept = 0.0;
  VectorXd slope;
  double noise_var = 1.0;
};

enum class ContaminationKind {
  BackgroundBox,  // uniform over a box in (x, y)
  Pointwise,      // spherical Gaussian around one (x, y) location
  CollinearX,     // along a segment in covariate space, y from a line rule
  ExactFitXY,     // x uniform over a box, y near a constant level
};

// Parameters for one contamination batch. Which fields apply depends on
// kind:
//   BackgroundBox: box_lower/box_upper over (x_1..x_d, y).
//   Pointwise:     location (d+1 entries, last is y) and spread.
//   CollinearX:    x = line_anchor + u*line_direction for u ~ U(0,1), plus
//                  N(0, line_jitter^2) noise per coordinate; y =
//                  response_intercept + response_slope'x + N(0, response_jitter^2).
//   ExactFitXY:    x uniform over box_lower/box_upper (d entries); y =
//                  response_level + N(0, response_jitter^2).
struct ContaminationSpec {
  ContaminationKind kind = ContaminationKind::BackgroundBox;
  int count = 0;
  VectorXd box_lower, box_upper;
  VectorXd location;
  double spread = 0.1;
  VectorXd line_anchor, line_direction;
  double line_jitter = 0.0;
  double response_intercept = 0.0;
  VectorXd response_slope;
  double response_jitter = 0.0;
  double response_level = 0.0;
};

struct ScenarioSpec {
  std::vector<ComponentSpec> components;
  int n_clean = 0;
  // When non-empty, exact per-component clean counts (must sum to n_clean);
  // otherwise component membership is drawn from the weights.
  std::vector<int> fixed_counts;
  std::vector<ContaminationSpec> contamination;
  std::uint64_t seed = 0;
};

// Clean sample from the mixture: x ~ N(mean, scatter) within the drawn
// component, y on the component line plus noise. true_labels filled 1..G.
Dataset sample_cwm(const ScenarioSpec& spec, RngStream& rng);

// Appends `count` contaminated rows (true_label 0) to a dataset.
Dataset contaminate(const Dataset& dataset, const ContaminationSpec& spec,
                    RngStream& rng);

// Clean sample plus every contamination batch of the spec, in order.
Dataset generate(const ScenarioSpec& spec);

// Named scenarios: simdata1..simdata8 and tone_analog1..tone_analog4 (with
// tone_analog an alias for tone_analog1). Counts, contamination locations
// and stated variance ratios are fixed by the scenarios these mirror; the
// remaining shape parameters are this repo's documented stand-ins.
ScenarioSpec preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace cwrm
