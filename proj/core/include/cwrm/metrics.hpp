#pragma once

#include <optional>
#include <vector>

#include "cwrm/datagen.hpp"
#include "cwrm/types.hpp"

namespace cwrm {

struct EvalMetrics {
  // Fraction of true contamination rows (true_label 0) that were trimmed.
  double contamination_recall = 0.0;
  // Fraction of clean rows (true_label > 0) that were trimmed.
  double false_trim_rate = 0.0;
  // Misclassification rate on clean, untrimmed rows, minimized over
  // permutations of the fitted component labels.
  double clean_classification_error = 0.0;
  int n_rows = 0;
  int n_contaminated = 0;
  int n_clean_untrimmed = 0;
  // Permutation of fitted labels realizing the minimum error:
  // fitted g is matched to true component label_map[g-1].
  std::vector<int> label_map;
};

struct ComponentErrors {
  double mean_abs_err = 0.0;       // ||mu_hat - mu||_inf, 0 when no truth
  double slope_abs_err = 0.0;      // ||b_hat - b||_inf
  double intercept_abs_err = 0.0;  // |b0_hat - b0|
  double noise_var_abs_err = 0.0;  // |s2_hat - s2|
};

// Trimming and classification quality of fitted labels against ground
// truth. Throws LengthMismatch when the vectors disagree in length and
// BadConfig when true component labels exceed the permutation range.
EvalMetrics evaluate_labels(const std::vector<int>& true_labels,
                            const std::vector<int>& fitted_labels,
                            int n_groups);

// Per-component parameter errors under the label permutation chosen by
// evaluate_labels. Slot g of the result compares fitted component g+1 with
// the spec component it was matched to.
std::vector<ComponentErrors> parameter_errors(
    const ModelParams& params, const ScenarioSpec& truth,
    const std::vector<int>& label_map);

}  // namespace cwrm
