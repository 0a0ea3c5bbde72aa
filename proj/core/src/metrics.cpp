#include "cwrm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cwrm {

EvalMetrics evaluate_labels(const std::vector<int>& true_labels,
                            const std::vector<int>& fitted_labels,
                            int n_groups) {
  if (true_labels.size() != fitted_labels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "label vectors differ in length: " +
                    std::to_string(true_labels.size()) + " vs " +
                    std::to_string(fitted_labels.size()));
  }
  const int n = static_cast<int>(true_labels.size());
  int max_label = n_groups;
  for (int t : true_labels) max_label = std::max(max_label, t);
  for (int f : fitted_labels) max_label = std::max(max_label, f);
  if (max_label > 9) {
    throw Error(ErrorCode::BadConfig,
                "too many component labels for permutation search");
  }

  EvalMetrics out;
  out.n_rows = n;
  int n_clean = 0;
  int clean_trimmed = 0;
  int contaminated_trimmed = 0;
  for (int i = 0; i < n; ++i) {
    if (true_labels[i] == 0) {
      ++out.n_contaminated;
      if (fitted_labels[i] == 0) ++contaminated_trimmed;
    } else {
      ++n_clean;
      if (fitted_labels[i] == 0) ++clean_trimmed;
    }
  }
  out.contamination_recall =
      out.n_contaminated > 0
          ? static_cast<double>(contaminated_trimmed) / out.n_contaminated
          : 1.0;
  out.false_trim_rate =
      n_clean > 0 ? static_cast<double>(clean_trimmed) / n_clean : 0.0;

  // Misclassification on clean, untrimmed rows under the best relabeling.
  std::vector<int> rows;
  for (int i = 0; i < n; ++i) {
    if (true_labels[i] > 0 && fitted_labels[i] > 0) rows.push_back(i);
  }
  out.n_clean_untrimmed = static_cast<int>(rows.size());
  std::vector<int> perm(max_label);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> best_perm = perm;
  int best_miss = static_cast<int>(rows.size()) + 1;
  do {
    int miss = 0;
    for (int i : rows) {
      if (perm[fitted_labels[i] - 1] != true_labels[i]) ++miss;
    }
    if (miss < best_miss) {
      best_miss = miss;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.clean_classification_error =
      rows.empty() ? 0.0 : static_cast<double>(best_miss) / rows.size();
  out.label_map.assign(best_perm.begin(), best_perm.begin() + n_groups);
  return out;
}

std::vector<ComponentErrors> parameter_errors(
    const ModelParams& params, const ScenarioSpec& truth,
    const std::vector<int>& label_map) {
  const int g_count = params.n_groups();
  std::vector<ComponentErrors> out(g_count);
  for (int g = 0; g < g_count; ++g) {
    if (g >= static_cast<int>(label_map.size())) break;
    const int target = label_map[g] - 1;
    if (target < 0 || target >= static_cast<int>(truth.components.size())) {
      continue;
    }
    const ComponentSpec& truth_comp = truth.components[target];
    ComponentErrors& err = out[g];
    err.mean_abs_err =
        (params.means[g] - truth_comp.mean).cwiseAbs().maxCoeff();
    err.slope_abs_err =
        (params.slopes[g] - truth_comp.slope).cwiseAbs().maxCoeff();
    err.intercept_abs_err =
        std::abs(params.intercepts[g] - truth_comp.intercept);
    err.noise_var_abs_err =
        std::abs(params.noise_vars[g] - truth_comp.noise_var);
  }
  return out;
}

}  // namespace cwrm
