#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cwrm/constraints.hpp"
#include "cwrm/oracle.hpp"

using namespace cwrm;

namespace {

WeightedValues wv(std::vector<double> values, std::vector<double> weights,
                  double c) {
  WeightedValues out;
  out.values = std::move(values);
  out.weights = std::move(weights);
  out.c = c;
  return out;
}

MatrixXd random_spd(std::mt19937_64& gen, int d, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = dist(gen);
  }
  return scale * (a * a.transpose()) + 1e-3 * MatrixXd::Identity(d, d);
}

double eig_ratio(const std::vector<MatrixXd>& mats) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const MatrixXd& m : mats) {
    const auto [e, u] = sym_eigen(m);
    lo = std::min(lo, e.minCoeff());
    hi = std::max(hi, e.maxCoeff());
  }
  return hi / lo;
}

}  // namespace

TEST_CASE("two sided clamp") {
  CHECK(truncate(5.0, 1.0, 2.0) == 2.0);
  CHECK(truncate(0.5, 1.0, 2.0) == 1.0);
  CHECK(truncate(1.5, 1.0, 2.0) == 1.5);
  CHECK(truncate(1.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("threshold solver reproduces hand solved cases") {
  // widely split pair: neither value is kept, the level sits between
  const WeightedValues a = wv({1.0, 100.0}, {0.5, 0.5}, 4.0);
  const double ma = optimal_threshold(a);
  CHECK(ma == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(truncation_objective(a, ma) ==
        doctest::Approx(4.258096538021482).epsilon(1e-13));

  // a zero value forces the level strictly positive
  const WeightedValues b = wv({0.0, 5.0}, {0.5, 0.5}, 4.0);
  const double mb = optimal_threshold(b);
  CHECK(mb == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(truncation_objective(b, mb) ==
        doctest::Approx(1.2231435513142097).epsilon(1e-13));

  // c = 1 collapses everything onto the weighted mean
  const WeightedValues c = wv({0.25, 0.01}, {0.5, 0.5}, 1.0);
  CHECK(optimal_threshold(c) == doctest::Approx(0.13).epsilon(1e-12));

  CHECK_THROWS_AS(optimal_threshold(wv({0.0, 0.0}, {0.5, 0.5}, 4.0)), Error);
}

TEST_CASE("threshold solver never loses to a fine grid search") {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> log_value(-4.0, 4.0);
  std::uniform_real_distribution<double> log_c(0.0, 3.0);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::uniform_int_distribution<int> count(1, 10);
  for (int round = 0; round < 50; ++round) {
    WeightedValues case_wv;
    const int k = count(gen);
    for (int j = 0; j < k; ++j) {
      case_wv.values.push_back(std::pow(10.0, log_value(gen)));
      case_wv.weights.push_back(weight(gen));
    }
    case_wv.c = std::pow(10.0, log_c(gen));
    const double m = optimal_threshold(case_wv);
    const double obj = truncation_objective(case_wv, m);
    const auto grid = oracle::grid_threshold(case_wv, 20000);
    CHECK(obj <= grid.objective + 1e-9);
  }
}

TEST_CASE("objective never goes below the untruncated bound") {
  const WeightedValues feasible = wv({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}, 5.0);
  double floor_sum = 0.0;
  for (std::size_t j = 0; j < feasible.values.size(); ++j) {
    floor_sum += feasible.weights[j] * (std::log(feasible.values[j]) + 1.0);
  }
  const double m = optimal_threshold(feasible);
  // ratio 3 fits inside c = 5, so truncation is the identity and the bound
  // is attained
  CHECK(truncation_objective(feasible, m) ==
        doctest::Approx(floor_sum).epsilon(1e-12));

  const WeightedValues tight = wv({1.0, 100.0}, {0.5, 0.5}, 4.0);
  double tight_floor = 0.0;
  for (std::size_t j = 0; j < tight.values.size(); ++j) {
    tight_floor += tight.weights[j] * (std::log(tight.values[j]) + 1.0);
  }
  CHECK(truncation_objective(tight, optimal_threshold(tight)) >
        tight_floor + 1e-6);
}

TEST_CASE("feasible inputs pass through bitwise untouched") {
  std::vector<MatrixXd> mats{MatrixXd::Constant(1, 1, 1.0),
                             MatrixXd::Constant(1, 1, 3.9)};
  VectorXd weights(2);
  weights << 0.5, 0.5;
  const auto out = constrain_scatters(mats, weights, 4.0);
  CHECK(out[0](0, 0) == 1.0);
  CHECK(out[1](0, 0) == 3.9);

  VectorXd s2(3);
  s2 << 0.2, 0.5, 0.7;
  const VectorXd vs = constrain_variances(s2, VectorXd::Constant(3, 1.0), 4.0);
  CHECK((vs.array() == s2.array()).all());
}

TEST_CASE("constrained scatters are feasible, idempotent and spd") {
  std::mt19937_64 gen(101);
  for (int round = 0; round < 15; ++round) {
    const int d = 1 + round % 3;
    std::vector<MatrixXd> mats;
    for (int g = 0; g < 3; ++g) {
      mats.push_back(random_spd(gen, d, std::pow(10.0, g - 1)));
    }
    VectorXd weights(3);
    weights << 0.2, 0.5, 0.3;
    const double c = 5.0;

    const auto once = constrain_scatters(mats, weights, c);
    CHECK(eig_ratio(once) <= c * (1.0 + 1e-12));
    for (const MatrixXd& m : once) {
      const auto [e, u] = sym_eigen(m);
      CHECK(e.minCoeff() > 0.0);
    }
    const auto twice = constrain_scatters(once, weights, c);
    for (int g = 0; g < 3; ++g) {
      CHECK((twice[g] - once[g]).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("a unit ratio bound forces equal spherical scatters") {
  std::mt19937_64 gen(7);
  std::vector<MatrixXd> mats;
  for (int g = 0; g < 3; ++g) mats.push_back(random_spd(gen, 2, 1.0 + g));
  VectorXd weights(3);
  weights << 0.3, 0.4, 0.3;

  const auto out = constrain_scatters(mats, weights, 1.0);
  const double a = out[0](0, 0);
  for (const MatrixXd& m : out) {
    CHECK((m - a * MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
  }

  VectorXd s2(3);
  s2 << 0.25, 0.01, 0.4;
  const VectorXd vs = constrain_variances(s2, weights, 1.0);
  CHECK(std::abs(vs[0] - vs[1]) <= 1e-12);
  CHECK(std::abs(vs[0] - vs[2]) <= 1e-12);
  // the common value is the weighted mean
  CHECK(vs[0] == doctest::Approx(weights.dot(s2)).epsilon(1e-12));
}

TEST_CASE("zero weight components are clamped but carry no vote") {
  // the active component is feasible alone, so the level ignores the dead one
  std::vector<MatrixXd> mats{MatrixXd::Constant(1, 1, 1.0),
                             MatrixXd::Constant(1, 1, 1e6)};
  VectorXd weights(2);
  weights << 1.0, 0.0;
  const auto out = constrain_scatters(mats, weights, 2.0);
  CHECK(out[0](0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out[1](0, 0) <= 2.0 * (1.0 + 1e-12));

  CHECK_THROWS_AS(constrain_scatters(mats, VectorXd::Zero(2), 2.0), Error);
}

TEST_CASE("symmetric eigendecomposition reconstructs and sorts descending") {
  std::mt19937_64 gen(13);
  const MatrixXd a = random_spd(gen, 3, 2.0);
  const auto [e, u] = sym_eigen(a);
  CHECK(e[0] >= e[1]);
  CHECK(e[1] >= e[2]);
  const MatrixXd back = u.transpose() * e.asDiagonal() * u;
  CHECK((back - a).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
  const MatrixXd eye = u * u.transpose();
  CHECK((eye - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);

  MatrixXd skew(2, 2);
  skew << 1.0, 2.0, -2.0, 1.0;
  CHECK_THROWS_AS(sym_eigen(skew), Error);
}
