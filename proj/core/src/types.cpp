#include "cwrm/types.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cwrm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroWeights: return "ZeroWeights";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DegenerateDensity: return "DegenerateDensity";
    case ErrorCode::DegenerateValues: return "DegenerateValues";
    case ErrorCode::EmptyComponent: return "EmptyComponent";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AllStartsFailed: return "AllStartsFailed";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

int Responsibilities::retained() const {
  return std::accumulate(z.begin(), z.end(), 0);
}

int retained_count(int n, double alpha) {
  return static_cast<int>(std::floor(n * (1.0 - alpha) + 1e-9));
}

void validate_dataset(const Dataset& dataset, const FitConfig& config) {
  const int n = dataset.n();
  const int d = dataset.d();
  if (n < 1 || d < 1) {
    throw Error(ErrorCode::BadConfig, "dataset must have n >= 1 and d >= 1");
  }
  if (dataset.y.size() != n) {
    throw Error(ErrorCode::LengthMismatch,
                "y has length " + std::to_string(dataset.y.size()) +
                    ", expected " + std::to_string(n));
  }
  if (!dataset.true_labels.empty() &&
      static_cast<int>(dataset.true_labels.size()) != n) {
    throw Error(ErrorCode::LengthMismatch,
                "true_labels has length " +
                    std::to_string(dataset.true_labels.size()) +
                    ", expected " + std::to_string(n));
  }
  if (!dataset.x.allFinite() || !dataset.y.allFinite()) {
    throw Error(ErrorCode::NonFinite, "dataset contains NaN or Inf");
  }
  for (int label : dataset.true_labels) {
    if (label < 0) {
      throw Error(ErrorCode::BadConfig, "true_labels must be >= 0");
    }
  }
  if (config.n_groups < 1) {
    throw Error(ErrorCode::BadConfig, "n_groups must be >= 1");
  }
  if (!(config.alpha >= 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorCode::BadConfig, "alpha must lie in [0, 1)");
  }
  if (!(config.c_x >= 1.0) || !(config.c_eps >= 1.0)) {
    throw Error(ErrorCode::BadConfig, "ratio bounds must be >= 1");
  }
  if (config.n_starts < 1 || config.max_iter < 1) {
    throw Error(ErrorCode::BadConfig, "n_starts and max_iter must be >= 1");
  }
  if (!(config.rel_tol > 0.0)) {
    throw Error(ErrorCode::BadConfig, "rel_tol must be > 0");
  }
  const int h = retained_count(n, config.alpha);
  const int needed = config.n_groups * (d + 2);
  if (h < needed) {
    throw Error(ErrorCode::TooFewPoints,
                "retained count " + std::to_string(h) + " below " +
                    std::to_string(needed) + " (= G*(d+2))");
  }
}

std::vector<int> map_classify(const Responsibilities& resp) {
  const int n = static_cast<int>(resp.tau.rows());
  const int g_count = static_cast<int>(resp.tau.cols());
  std::vector<int> labels(n, 0);
  for (int i = 0; i < n; ++i) {
    if (resp.z[i] == 0) continue;
    int best = 0;
    double best_val = resp.tau(i, 0);
    for (int g = 1; g < g_count; ++g) {
      if (resp.tau(i, g) > best_val) {
        best_val = resp.tau(i, g);
        best = g;
      }
    }
    labels[i] = best + 1;
  }
  return labels;
}

}  // namespace cwrm
