#include <vector>

#include <doctest.h>

#include "cwrm/datagen.hpp"
#include "cwrm/errors.hpp"
#include "cwrm/metrics.hpp"

using namespace cwrm;

TEST_CASE("label evaluation finds the right relabeling") {
  // Two contaminated rows (one caught, one missed) and four clean rows whose
  // fitted labels are globally swapped.
  const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
  const std::vector<int> fitted = {0, 1, 2, 2, 1, 1};
  const EvalMetrics m = evaluate_labels(truth, fitted, 2);

  CHECK(m.n_rows == 6);
  CHECK(m.n_contaminated == 2);
  CHECK(m.n_clean_untrimmed == 4);
  CHECK(m.contamination_recall == 0.5);
  CHECK(m.false_trim_rate == 0.0);
  CHECK(m.clean_classification_error == 0.0);
  REQUIRE(m.label_map.size() == 2);
  CHECK(m.label_map[0] == 2);
  CHECK(m.label_map[1] == 1);
}

TEST_CASE("label evaluation counts residual confusion") {
  const std::vector<int> truth = {1, 1, 1, 2, 2, 2};
  const std::vector<int> fitted = {1, 1, 2, 2, 2, 1};
  const EvalMetrics m = evaluate_labels(truth, fitted, 2);

  // Identity mapping misses two rows, the swap misses four.
  CHECK(m.clean_classification_error == doctest::Approx(1.0 / 3.0));
  CHECK(m.label_map[0] == 1);
  CHECK(m.label_map[1] == 2);
  // No contamination present: recall degenerates to a perfect score, and
  // trimming a clean row shows up in the false trim rate instead.
  CHECK(m.contamination_recall == 1.0);
  CHECK(m.false_trim_rate == 0.0);
}

TEST_CASE("trimmed clean rows leave the classification pool") {
  const std::vector<int> truth = {1, 1, 2, 2};
  const std::vector<int> fitted = {0, 1, 2, 0};
  const EvalMetrics m = evaluate_labels(truth, fitted, 2);
  CHECK(m.false_trim_rate == 0.5);
  CHECK(m.n_clean_untrimmed == 2);
  CHECK(m.clean_classification_error == 0.0);
}

TEST_CASE("label evaluation rejects malformed input") {
  CHECK_THROWS_AS(evaluate_labels({1, 2}, {1}, 2), Error);
  try {
    evaluate_labels({1, 2}, {1}, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }

  // Ten distinct component labels would need a 10! permutation sweep.
  const std::vector<int> truth = {10, 1};
  const std::vector<int> fitted = {1, 1};
  try {
    evaluate_labels(truth, fitted, 2);
    FAIL("expected BadConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadConfig);
  }
}

TEST_CASE("parameter errors follow the label map") {
  ScenarioSpec truth;
  truth.components.resize(2);
  truth.components[0].mean = VectorXd::Constant(1, 0.0);
  truth.components[0].scatter = MatrixXd::Constant(1, 1, 1.0);
  truth.components[0].slope = VectorXd::Constant(1, 2.0);
  truth.components[0].intercept = 1.0;
  truth.components[0].noise_var = 0.25;
  truth.components[1].mean = VectorXd::Constant(1, 5.0);
  truth.components[1].scatter = MatrixXd::Constant(1, 1, 1.0);
  truth.components[1].slope = VectorXd::Constant(1, -1.0);
  truth.components[1].intercept = 2.0;
  truth.components[1].noise_var = 1.0;

  ModelParams params;
  params.weights = VectorXd::Constant(2, 0.5);
  params.means = {VectorXd::Constant(1, 4.9), VectorXd::Constant(1, 0.3)};
  params.scatters = {MatrixXd::Constant(1, 1, 1.0),
                     MatrixXd::Constant(1, 1, 1.0)};
  params.slopes = {VectorXd::Constant(1, -1.1), VectorXd::Constant(1, 2.05)};
  params.intercepts = VectorXd::Zero(2);
  params.intercepts << 2.2, 0.8;
  params.noise_vars = VectorXd::Zero(2);
  params.noise_vars << 0.9, 0.3;

  // Fitted component 1 plays the role of spec component 2 and vice versa.
  const std::vector<int> label_map = {2, 1};
  const auto errs = parameter_errors(params, truth, label_map);
  REQUIRE(errs.size() == 2);
  CHECK(errs[0].mean_abs_err == doctest::Approx(0.1));
  CHECK(errs[0].slope_abs_err == doctest::Approx(0.1));
  CHECK(errs[0].intercept_abs_err == doctest::Approx(0.2));
  CHECK(errs[0].noise_var_abs_err == doctest::Approx(0.1));
  CHECK(errs[1].mean_abs_err == doctest::Approx(0.3));
  CHECK(errs[1].slope_abs_err == doctest::Approx(0.05));
  CHECK(errs[1].intercept_abs_err == doctest::Approx(0.2));
  CHECK(errs[1].noise_var_abs_err == doctest::Approx(0.05));
}
