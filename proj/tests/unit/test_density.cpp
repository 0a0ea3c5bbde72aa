#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "cwrm/density.hpp"

using namespace cwrm;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

VectorXd vec1(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

// Two overlapping single-covariate components used across the cases below.
ModelParams overlap_params() {
  ModelParams p;
  p.weights = VectorXd(2);
  p.weights << 0.6, 0.4;
  p.means = {vec1(1.0), vec1(2.0)};
  p.scatters = {MatrixXd::Constant(1, 1, 0.8), MatrixXd::Constant(1, 1, 1.5)};
  p.intercepts = VectorXd(2);
  p.intercepts << 0.5, 1.5;
  p.slopes = {vec1(2.0), vec1(1.4)};
  p.noise_vars = VectorXd(2);
  p.noise_vars << 0.25, 0.49;
  return p;
}

}  // namespace

TEST_CASE("univariate log density matches hand computed values") {
  CHECK(log_gauss_uni(0.0, 0.0, 1.0) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-15));
  CHECK(log_gauss_uni(1.0, 0.0, 4.0) ==
        doctest::Approx(-1.737085713764618).epsilon(1e-15));
  CHECK(log_gauss_uni(0.7, -0.2, 2.3) ==
        doctest::Approx(-1.5114800511939637).epsilon(1e-15));
  CHECK_THROWS_AS(log_gauss_uni(0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(log_gauss_uni(0.0, 0.0, -1.0), Error);
}

TEST_CASE("multivariate log density matches a hand computed 2d case") {
  ModelParams p;
  p.weights = VectorXd::Constant(1, 1.0);
  VectorXd mu(2);
  mu << 0.5, 0.3;
  MatrixXd sigma(2, 2);
  sigma << 2.0, 0.6, 0.6, 1.5;
  p.means = {mu};
  p.scatters = {sigma};
  p.intercepts = VectorXd::Zero(1);
  p.slopes = {VectorXd::Zero(2)};
  p.noise_vars = VectorXd::Constant(1, 1.0);
  const ComponentCache cache = ComponentCache::build(p);

  VectorXd x(2);
  x << 1.2, -0.4;
  CHECK(log_gauss_multi(x, mu, cache.entries[0]) ==
        doctest::Approx(-2.7594407674127).epsilon(1e-13));

  // shifting x and the mean together changes nothing measurable
  VectorXd t(2);
  t << 3.0, -7.0;
  CHECK(log_gauss_multi(x + t, mu + t, cache.entries[0]) ==
        doctest::Approx(log_gauss_multi(x, mu, cache.entries[0]))
            .epsilon(1e-12));
}

TEST_CASE("cache construction rejects degenerate parameters") {
  ModelParams p = overlap_params();
  SUBCASE("non positive definite scatter") {
    p.scatters[1] = MatrixXd::Constant(1, 1, -0.5);
    CHECK_THROWS_AS(ComponentCache::build(p), Error);
  }
  SUBCASE("zero noise variance") {
    p.noise_vars[0] = 0.0;
    CHECK_THROWS_AS(ComponentCache::build(p), Error);
  }
}

TEST_CASE("mixture density and posteriors match hand computed values") {
  const ModelParams p = overlap_params();
  const ComponentCache cache = ComponentCache::build(p);
  const VectorXd x = vec1(1.4);
  const double y = 3.1;

  CHECK(component_log_density(x, y, p, cache, 0) ==
        doctest::Approx(-1.7239837339582857).epsilon(1e-13));
  CHECK(component_log_density(x, y, p, cache, 1) ==
        doctest::Approx(-2.852470306358034).epsilon(1e-13));
  CHECK(mixture_log_density(x, y, p, cache) ==
        doctest::Approx(-1.443686980459962).epsilon(1e-13));

  const VectorXd post = posteriors(x, y, p, cache);
  CHECK(post[0] == doctest::Approx(0.755559493261336).epsilon(1e-12));
  CHECK(post[1] == doctest::Approx(0.24444050673866397).epsilon(1e-12));
  CHECK(post.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixture dominates every component and posteriors stay normalized") {
  const ModelParams p = overlap_params();
  const ComponentCache cache = ComponentCache::build(p);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> dist(1.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    const VectorXd x = vec1(dist(gen));
    const double y = dist(gen);
    const double mix = mixture_log_density(x, y, p, cache);
    for (int g = 0; g < 2; ++g) {
      CHECK(mix >= component_log_density(x, y, p, cache, g));
    }
    const VectorXd post = posteriors(x, y, p, cache);
    CHECK(post.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(post.minCoeff() >= 0.0);
    CHECK(post.maxCoeff() <= 1.0);
    CHECK(std::isfinite(mix));
  }
}

TEST_CASE("zero weight silences a component without poisoning the mixture") {
  ModelParams p = overlap_params();
  p.weights << 1.0, 0.0;
  const ComponentCache cache = ComponentCache::build(p);
  const VectorXd x = vec1(1.0);
  CHECK(component_log_density(x, 0.0, p, cache, 1) == kNegInf);
  CHECK(std::isfinite(mixture_log_density(x, 0.0, p, cache)));
  const VectorXd post = posteriors(x, 0.0, p, cache);
  CHECK(post[0] == 1.0);
  CHECK(post[1] == 0.0);
}

TEST_CASE("log sum exp is exact on frozen cases and immune to reordering") {
  const std::vector<double> two{-1000.0, -1001.0};
  CHECK(log_sum_exp(two) == doctest::Approx(-999.6867383124818).epsilon(1e-15));
  const std::vector<double> three{-1000.0, -1001.0, -1002.0};
  CHECK(log_sum_exp(three) ==
        doctest::Approx(-999.5923940355556).epsilon(1e-15));

  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> dist(-700.0, 100.0);
  for (int round = 0; round < 30; ++round) {
    std::vector<double> v(20);
    for (double& e : v) e = dist(gen);
    const double base = log_sum_exp(v);
    std::shuffle(v.begin(), v.end(), gen);
    // bitwise equality is the contract here, not approximate equality
    CHECK(log_sum_exp(v) == base);
  }

  CHECK(log_sum_exp(std::span<const double>{}) == kNegInf);
  const std::vector<double> inf{kNegInf, kNegInf};
  CHECK(log_sum_exp(inf) == kNegInf);
  const std::vector<double> one{-3.5};
  CHECK(log_sum_exp(one) == -3.5);
}

TEST_CASE("the density matrix row reduces to the mixture density") {
  const ModelParams p = overlap_params();
  const ComponentCache cache = ComponentCache::build(p);
  Dataset ds;
  ds.x = MatrixXd(3, 1);
  ds.x << 0.5, 1.4, 2.2;
  ds.y = VectorXd(3);
  ds.y << 1.1, 3.1, 4.0;
  const MatrixXd logs = component_log_density_matrix(ds, p, cache);
  REQUIRE(logs.rows() == 3);
  REQUIRE(logs.cols() == 2);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> row{logs(i, 0), logs(i, 1)};
    CHECK(log_sum_exp(row) ==
          doctest::Approx(mixture_log_density(ds.x.row(i).transpose(), ds.y[i],
                                              p, cache))
              .epsilon(1e-14));
  }
}
