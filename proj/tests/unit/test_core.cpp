#include <doctest.h>

#include <limits>

#include "cwrm/types.hpp"

using namespace cwrm;

namespace {

Dataset small_dataset(int n, int d) {
  Dataset ds;
  ds.x = MatrixXd::Zero(n, d);
  ds.y = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) ds.x(i, j) = 0.1 * i + j;
    ds.y[i] = 0.5 * i;
  }
  return ds;
}

}  // namespace

TEST_CASE("retained count floors n(1-alpha)") {
  CHECK(retained_count(200, 0.1) == 180);
  CHECK(retained_count(12, 1.0 / 6.0) == 10);
  CHECK(retained_count(7, 0.0) == 7);
  CHECK(retained_count(165, 0.1) == 148);
  // 10 * 0.7 lands a hair under 7 in doubles; must still give 7.
  CHECK(retained_count(10, 0.3) == 7);
  CHECK(retained_count(100, 0.99) == 1);
}

TEST_CASE("validate rejects malformed datasets and configs") {
  FitConfig cfg;
  Dataset ds = small_dataset(40, 2);
  CHECK_NOTHROW(validate_dataset(ds, cfg));

  SUBCASE("non finite entries") {
    ds.x(3, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(validate_dataset(ds, cfg), "dataset contains NaN or Inf",
                         Error);
  }
  SUBCASE("length mismatch") {
    ds.y.conservativeResize(39);
    try {
      validate_dataset(ds, cfg);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }
  SUBCASE("label length mismatch") {
    ds.true_labels.assign(10, 1);
    CHECK_THROWS_AS(validate_dataset(ds, cfg), Error);
  }
  SUBCASE("negative labels") {
    ds.true_labels.assign(40, 1);
    ds.true_labels[5] = -2;
    CHECK_THROWS_AS(validate_dataset(ds, cfg), Error);
  }
  SUBCASE("alpha out of range") {
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(validate_dataset(ds, cfg), Error);
  }
  SUBCASE("ratio bounds below one") {
    cfg.c_x = 0.5;
    CHECK_THROWS_AS(validate_dataset(ds, cfg), Error);
  }
  SUBCASE("too few retained rows for the groups") {
    cfg.n_groups = 3;
    cfg.alpha = 0.75;  // keeps 10 rows, needs 3 * 4
    try {
      validate_dataset(ds, cfg);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooFewPoints);
    }
  }
}

TEST_CASE("map classification breaks ties toward the first component") {
  Responsibilities resp;
  resp.tau = MatrixXd::Zero(4, 3);
  resp.z = {1, 1, 0, 1};
  resp.tau.row(0) << 0.2, 0.5, 0.3;
  resp.tau.row(1) << 0.4, 0.4, 0.2;  // tie between 1 and 2
  resp.tau.row(3) << 0.1, 0.2, 0.7;

  const std::vector<int> labels = map_classify(resp);
  CHECK(labels == std::vector<int>{2, 1, 0, 3});
  CHECK(resp.retained() == 3);
}
