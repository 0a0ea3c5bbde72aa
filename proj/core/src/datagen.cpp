#include "cwrm/datagen.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

namespace cwrm {

namespace {

VectorXd vec1(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

ComponentSpec comp1d(double mean, double x_var, double intercept,
                     double slope, double noise_var) {
  ComponentSpec c;
  c.weight = 0.5;
  c.mean = vec1(mean);
  c.scatter = MatrixXd::Constant(1, 1, x_var);
  c.intercept = intercept;
  c.slope = vec1(slope);
  c.noise_var = noise_var;
  return c;
}

ContaminationSpec pointwise(int count, const VectorXd& location,
                            double spread) {
  ContaminationSpec s;
  s.kind = ContaminationKind::Pointwise;
  s.count = count;
  s.location = location;
  s.spread = spread;
  return s;
}

ContaminationSpec background(int count, const VectorXd& lower,
                             const VectorXd& upper) {
  ContaminationSpec s;
  s.kind = ContaminationKind::BackgroundBox;
  s.count = count;
  s.box_lower = lower;
  s.box_upper = upper;
  return s;
}

// Two overlapping single-covariate groups on one location, with parallel
// close-by lines crossing y = 0 inside the contamination's x range; used by
// the near-degenerate scenario so a tiny-variance component at y = 0 is a
// genuine competitor once the variance constraint is relaxed.
void simdata3_components(ScenarioSpec& spec) {
  spec.components = {comp1d(2.5, 0.25, -1.75, 0.5, 0.0225),
                     comp1d(2.5, 0.25, -1.65, 0.5, 0.0225)};
}

ScenarioSpec tone_analog(const VectorXd& location) {
  // Two overlapping covariate bands with well separated regression lines.
  // The tight contamination blob sits either far off both lines in the
  // response or far outside the covariate bands but on the extension of one
  // line, so regression-only trimming has nothing to notice there while the
  // covariate marginal does.
  ScenarioSpec spec;
  spec.components = {comp1d(2.0, 0.25, 0.5, 0.4, 0.04),
                     comp1d(3.0, 0.25, 0.7, 0.55, 0.04)};
  spec.n_clean = 150;
  spec.fixed_counts = {75, 75};
  spec.contamination = {pointwise(15, location, 0.1)};
  return spec;
}

int draw_component(const VectorXd& weights, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int g = 0; g < weights.size(); ++g) {
    acc += weights[g];
    if (u < acc) return g;
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

Dataset sample_cwm(const ScenarioSpec& spec, RngStream& rng) {
  const int g_count = static_cast<int>(spec.components.size());
  if (g_count == 0 || spec.n_clean < 0) {
    throw Error(ErrorCode::BadConfig, "scenario needs components and rows");
  }
  const int d = static_cast<int>(spec.components[0].mean.size());

  std::vector<int> counts;
  if (!spec.fixed_counts.empty()) {
    if (static_cast<int>(spec.fixed_counts.size()) != g_count) {
      throw Error(ErrorCode::LengthMismatch,
                  "fixed_counts must have one entry per component");
    }
    counts = spec.fixed_counts;
    if (std::accumulate(counts.begin(), counts.end(), 0) != spec.n_clean) {
      throw Error(ErrorCode::BadConfig, "fixed_counts must sum to n_clean");
    }
  } else {
    VectorXd weights(g_count);
    for (int g = 0; g < g_count; ++g) {
      weights[g] = spec.components[g].weight;
    }
    weights /= weights.sum();
    counts.assign(g_count, 0);
    for (int i = 0; i < spec.n_clean; ++i) {
      ++counts[draw_component(weights, rng)];
    }
  }

  std::vector<Eigen::LLT<MatrixXd>> chol(g_count);
  for (int g = 0; g < g_count; ++g) {
    chol[g].compute(spec.components[g].scatter);
    if (chol[g].info() != Eigen::Success) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "scatter of component " + std::to_string(g + 1) +
                      " is not positive definite");
    }
  }

  Dataset out;
  out.x.resize(spec.n_clean, d);
  out.y.resize(spec.n_clean);
  out.true_labels.resize(spec.n_clean);
  int row = 0;
  VectorXd noise(d);
  for (int g = 0; g < g_count; ++g) {
    const ComponentSpec& comp = spec.components[g];
    const double sd = std::sqrt(comp.noise_var);
    for (int k = 0; k < counts[g]; ++k, ++row) {
      for (int j = 0; j < d; ++j) noise[j] = rng.normal();
      const VectorXd x = comp.mean + chol[g].matrixL() * noise;
      out.x.row(row) = x.transpose();
      out.y[row] = comp.slope.dot(x) + comp.intercept + rng.normal(0.0, sd);
      out.true_labels[row] = g + 1;
    }
  }
  return out;
}

Dataset contaminate(const Dataset& dataset, const ContaminationSpec& spec,
                    RngStream& rng) {
  const int n = dataset.n();
  const int d = dataset.d();
  Dataset out;
  out.x.resize(n + spec.count, d);
  out.y.resize(n + spec.count);
  out.x.topRows(n) = dataset.x;
  out.y.head(n) = dataset.y;
  out.true_labels = dataset.true_labels;
  if (out.true_labels.empty() && spec.count > 0) {
    out.true_labels.assign(n, 1);
  }
  out.true_labels.resize(n + spec.count, 0);

  for (int k = 0; k < spec.count; ++k) {
    const int row = n + k;
    switch (spec.kind) {
      case ContaminationKind::BackgroundBox: {
        for (int j = 0; j < d; ++j) {
          out.x(row, j) = rng.uniform(spec.box_lower[j], spec.box_upper[j]);
        }
        out.y[row] = rng.uniform(spec.box_lower[d], spec.box_upper[d]);
        break;
      }
      case ContaminationKind::Pointwise: {
        for (int j = 0; j < d; ++j) {
          out.x(row, j) = rng.normal(spec.location[j], spec.spread);
        }
        out.y[row] = rng.normal(spec.location[d], spec.spread);
        break;
      }
      case ContaminationKind::CollinearX: {
        const double u = rng.uniform();
        VectorXd x(d);
        for (int j = 0; j < d; ++j) {
          x[j] = spec.line_anchor[j] + u * spec.line_direction[j] +
                 rng.normal(0.0, spec.line_jitter);
        }
        out.x.row(row) = x.transpose();
        out.y[row] = spec.response_intercept + spec.response_slope.dot(x) +
                     rng.normal(0.0, spec.response_jitter);
        break;
      }
      case ContaminationKind::ExactFitXY: {
        for (int j = 0; j < d; ++j) {
          out.x(row, j) = rng.uniform(spec.box_lower[j], spec.box_upper[j]);
        }
        out.y[row] =
            spec.response_level + rng.normal(0.0, spec.response_jitter);
        break;
      }
    }
  }
  return out;
}

Dataset generate(const ScenarioSpec& spec) {
  RngStream rng(spec.seed, 0);
  Dataset data = sample_cwm(spec, rng);
  for (const ContaminationSpec& c : spec.contamination) {
    data = contaminate(data, c, rng);
  }
  return data;
}

ScenarioSpec preset(const std::string& name) {
  ScenarioSpec spec;
  if (name == "simdata1") {
    // Two well-separated groups with distinct lines; 20 contaminating
    // points concentrated far outside both clouds.
    spec.components = {comp1d(2.0, 1.0, -2.0, 2.0, 0.09),
                       comp1d(6.0, 1.0, 4.0, 0.5, 0.09)};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    spec.contamination = {pointwise(20, vec2(15.0, 20.0), 0.1)};
  } else if (name == "simdata2") {
    // Two covariate clouds centered at (2,2) and (4,4) sharing one response
    // plane, plus 20 nearly collinear covariate points beside the second
    // cloud whose responses follow the same plane.
    ComponentSpec a;
    a.weight = 0.5;
    a.mean = vec2(2.0, 2.0);
    a.scatter = 0.3 * MatrixXd::Identity(2, 2);
    a.intercept = 0.0;
    a.slope = vec2(1.0, 1.0);
    a.noise_var = 0.25;
    ComponentSpec b = a;
    b.mean = vec2(4.0, 4.0);
    spec.components = {a, b};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    ContaminationSpec line;
    line.kind = ContaminationKind::CollinearX;
    line.count = 20;
    line.line_anchor = vec2(4.5, 4.5);
    line.line_direction = vec2(0.8, 0.8);
    line.line_jitter = 0.01;
    line.response_intercept = 0.0;
    line.response_slope = vec2(1.0, 1.0);
    line.response_jitter = 0.5;
    spec.contamination = {line};
  } else if (name == "simdata3") {
    // 196 clean points in two barely distinguishable groups plus 4
    // spread-out high-leverage points whose responses sit almost exactly at
    // zero: a regression seeded through any one of them rotates onto the
    // rest, and a component put there has almost null residual variance
    // over a wide covariate stretch.
    simdata3_components(spec);
    spec.n_clean = 196;
    spec.fixed_counts = {98, 98};
    ContaminationSpec flat;
    flat.kind = ContaminationKind::ExactFitXY;
    flat.count = 4;
    flat.box_lower = vec1(4.4);
    flat.box_upper = vec1(8.4);
    flat.response_level = 0.0;
    flat.response_jitter = 1e-6;
    spec.contamination = {flat};
  } else if (name == "simdata4") {
    // Strongly different covariate spreads (variance ratio 16) under
    // background noise.
    spec.components = {comp1d(0.0, 0.25, 1.0, 1.0, 0.04),
                       comp1d(5.0, 4.0, 8.0, -1.0, 0.04)};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    spec.contamination = {
        background(20, vec2(-2.0, -4.0), vec2(10.0, 12.0))};
  } else if (name == "simdata5") {
    // Noise variances 0.5^2 and 0.1^2 (ratio 25) under background noise.
    spec.components = {comp1d(0.0, 1.0, 0.0, 1.0, 0.25),
                       comp1d(4.0, 1.0, 6.0, -0.5, 0.01)};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    spec.contamination = {
        background(20, vec2(-3.0, -3.0), vec2(8.0, 9.0))};
  } else if (name == "simdata6") {
    // Similar groups (tight ratio bounds stay honest) plus a concentrated
    // noise cluster between the clouds.
    spec.components = {comp1d(0.0, 1.0, 1.0, 2.0, 0.04),
                       comp1d(4.0, 1.0, 2.0, -1.0, 0.04)};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    spec.contamination = {pointwise(20, vec2(2.0, 8.0), 0.1)};
  } else if (name == "simdata7") {
    // Vertical outliers: contamination inside the covariate range but far
    // from both lines in response.
    spec.components = {comp1d(1.0, 0.49, 1.0, 2.0, 0.04),
                       comp1d(3.0, 0.49, 5.0, -1.0, 0.04)};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    spec.contamination = {pointwise(20, vec2(2.0, 10.0), 0.1)};
  } else if (name == "simdata8") {
    // Bad leverage: contamination far outside the covariate range but close
    // to the extension of one line.
    spec.components = {comp1d(1.0, 0.25, 1.0, 1.0, 0.04),
                       comp1d(2.2, 0.25, 4.0, -0.5, 0.04)};
    spec.n_clean = 180;
    spec.fixed_counts = {90, 90};
    spec.contamination = {pointwise(20, vec2(8.0, 0.5), 0.1)};
  } else if (name == "tone_analog" || name == "tone_analog1") {
    spec = tone_analog(vec2(2.5, 5.0));
  } else if (name == "tone_analog2") {
    spec = tone_analog(vec2(6.0, 4.0));
  } else if (name == "tone_analog3") {
    spec = tone_analog(vec2(0.0, 0.5));
  } else if (name == "tone_analog4") {
    spec = tone_analog(vec2(5.0, 2.5));
  } else {
    throw Error(ErrorCode::UnknownPreset, "unknown preset: " + name);
  }
  return spec;
}

std::vector<std::string> preset_names() {
  return {"simdata1",     "simdata2",     "simdata3",     "simdata4",
          "simdata5",     "simdata6",     "simdata7",     "simdata8",
          "tone_analog",  "tone_analog1", "tone_analog2", "tone_analog3",
          "tone_analog4"};
}

}  // namespace cwrm
