#include "cwrm/report.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

namespace cwrm {

namespace {

using nlohmann::json;

json to_json(const VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

VectorXd vector_from(const json& arr) {
  VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = arr.at(i).get<double>();
  }
  return v;
}

MatrixXd matrix_from(const json& arr) {
  const std::size_t n_rows = arr.size();
  if (n_rows == 0) return MatrixXd(0, 0);
  const std::size_t n_cols = arr.at(0).size();
  MatrixXd m(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const json& row = arr.at(i);
    if (row.size() != n_cols) {
      throw Error(ErrorCode::ParseError, "ragged matrix in JSON");
    }
    for (std::size_t j = 0; j < n_cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row.at(j).get<double>();
    }
  }
  return m;
}

json config_to_json(const FitConfig& config) {
  return json{{"n_groups", config.n_groups}, {"alpha", config.alpha},
              {"c_x", config.c_x},           {"c_eps", config.c_eps},
              {"n_starts", config.n_starts}, {"max_iter", config.max_iter},
              {"rel_tol", config.rel_tol},   {"seed", config.seed}};
}

FitConfig config_from_json(const json& j) {
  FitConfig config;
  config.n_groups = j.at("n_groups").get<int>();
  config.alpha = j.at("alpha").get<double>();
  config.c_x = j.at("c_x").get<double>();
  config.c_eps = j.at("c_eps").get<double>();
  config.n_starts = j.at("n_starts").get<int>();
  config.max_iter = j.at("max_iter").get<int>();
  config.rel_tol = j.at("rel_tol").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

json params_to_json(const ModelParams& params) {
  json means = json::array();
  json scatters = json::array();
  json slopes = json::array();
  for (std::size_t g = 0; g < params.means.size(); ++g) {
    means.push_back(to_json(params.means[g]));
    scatters.push_back(to_json(params.scatters[g]));
    slopes.push_back(to_json(params.slopes[g]));
  }
  return json{{"weights", to_json(params.weights)},
              {"means", means},
              {"scatters", scatters},
              {"intercepts", to_json(params.intercepts)},
              {"slopes", slopes},
              {"noise_vars", to_json(params.noise_vars)}};
}

ModelParams params_from_json(const json& j) {
  ModelParams params;
  params.weights = vector_from(j.at("weights"));
  for (const auto& m : j.at("means")) params.means.push_back(vector_from(m));
  for (const auto& s : j.at("scatters")) {
    params.scatters.push_back(matrix_from(s));
  }
  params.intercepts = vector_from(j.at("intercepts"));
  for (const auto& s : j.at("slopes")) params.slopes.push_back(vector_from(s));
  params.noise_vars = vector_from(j.at("noise_vars"));
  return params;
}

json mixreg_params_to_json(const MixRegParams& params) {
  json slopes = json::array();
  for (const auto& s : params.slopes) slopes.push_back(to_json(s));
  return json{{"weights", to_json(params.weights)},
              {"intercepts", to_json(params.intercepts)},
              {"slopes", slopes},
              {"noise_vars", to_json(params.noise_vars)}};
}

MixRegParams mixreg_params_from_json(const json& j) {
  MixRegParams params;
  params.weights = vector_from(j.at("weights"));
  params.intercepts = vector_from(j.at("intercepts"));
  for (const auto& s : j.at("slopes")) params.slopes.push_back(vector_from(s));
  params.noise_vars = vector_from(j.at("noise_vars"));
  return params;
}

template <class Params>
std::vector<BandRow> make_bands(const Params& params) {
  std::vector<BandRow> bands;
  const int n_groups = static_cast<int>(params.intercepts.size());
  bands.reserve(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    BandRow band;
    band.intercept = params.intercepts[g];
    band.slope = params.slopes[g];
    band.half_width = 2.0 * std::sqrt(params.noise_vars[g]);
    bands.push_back(std::move(band));
  }
  return bands;
}

template <class Fit>
void fill_common(RunReport& report, const Fit& fit) {
  report.labels = fit.labels;
  report.z = fit.resp.z;
  report.objective = fit.objective;
  report.n_iter = fit.n_iter;
  report.converged = fit.converged;
  report.start_index = fit.start_index;
  const int n = static_cast<int>(fit.labels.size());
  report.rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    RowRecord row;
    row.index = i;
    row.label = fit.labels[i];
    row.trimmed = fit.resp.z[i] == 0 ? 1 : 0;
    row.max_posterior =
        fit.resp.z[i] == 0 ? 0.0 : fit.resp.tau.row(i).maxCoeff();
    report.rows.push_back(row);
  }
}

bool equal(const VectorXd& a, const VectorXd& b) {
  return a.size() == b.size() && a == b;
}

bool equal(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

template <class Seq>
bool equal_seq(const Seq& a, const Seq& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(a[i], b[i])) return false;
  }
  return true;
}

const char* kind_name(ContaminationKind kind) {
  switch (kind) {
    case ContaminationKind::BackgroundBox: return "background_box";
    case ContaminationKind::Pointwise: return "pointwise";
    case ContaminationKind::CollinearX: return "collinear_x";
    case ContaminationKind::ExactFitXY: return "exact_fit_xy";
  }
  return "background_box";
}

ContaminationKind kind_from_name(const std::string& name) {
  if (name == "background_box") return ContaminationKind::BackgroundBox;
  if (name == "pointwise") return ContaminationKind::Pointwise;
  if (name == "collinear_x") return ContaminationKind::CollinearX;
  if (name == "exact_fit_xy") return ContaminationKind::ExactFitXY;
  throw Error(ErrorCode::ParseError, "unknown contamination kind: " + name);
}

}  // namespace

RunReport make_report(const Dataset& dataset, const FitConfig& config,
                      const TrimmedFit& fit) {
  (void)dataset;
  RunReport report;
  report.method = "cwrm";
  report.config = config;
  report.params = fit.params;
  report.bands = make_bands(fit.params);
  fill_common(report, fit);
  return report;
}

RunReport make_report(const Dataset& dataset, const FitConfig& config,
                      const MixRegFit& fit) {
  (void)dataset;
  RunReport report;
  report.method = "mixreg";
  report.config = config;
  report.mixreg_params = fit.params;
  report.bands = make_bands(fit.params);
  fill_common(report, fit);
  return report;
}

std::string serialize_report(const RunReport& report) {
  json j;
  j["schema"] = 1;
  j["method"] = report.method;
  j["config"] = config_to_json(report.config);
  j["objective"] = report.objective;
  j["n_iter"] = report.n_iter;
  j["converged"] = report.converged;
  j["start_index"] = report.start_index;
  j["wall_time_sec"] = report.wall_time_sec;
  if (report.method == "mixreg") {
    j["mixreg_params"] = mixreg_params_to_json(report.mixreg_params);
  } else {
    j["params"] = params_to_json(report.params);
  }
  j["labels"] = report.labels;
  j["z"] = report.z;
  json bands = json::array();
  for (const auto& band : report.bands) {
    bands.push_back(json{{"intercept", band.intercept},
                         {"slope", to_json(band.slope)},
                         {"half_width", band.half_width}});
  }
  j["bands"] = bands;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back(json{{"index", row.index},
                        {"label", row.label},
                        {"trimmed", row.trimmed},
                        {"max_posterior", row.max_posterior}});
  }
  j["rows"] = rows;
  return j.dump(2);
}

RunReport parse_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<int>() != 1) {
      throw Error(ErrorCode::ParseError, "unsupported report schema");
    }
    RunReport report;
    report.method = j.at("method").get<std::string>();
    report.config = config_from_json(j.at("config"));
    report.objective = j.at("objective").get<double>();
    report.n_iter = j.at("n_iter").get<int>();
    report.converged = j.at("converged").get<bool>();
    report.start_index = j.at("start_index").get<int>();
    report.wall_time_sec = j.at("wall_time_sec").get<double>();
    if (report.method == "mixreg") {
      report.mixreg_params = mixreg_params_from_json(j.at("mixreg_params"));
    } else {
      report.params = params_from_json(j.at("params"));
    }
    report.labels = j.at("labels").get<std::vector<int>>();
    report.z = j.at("z").get<std::vector<int>>();
    for (const auto& b : j.at("bands")) {
      BandRow band;
      band.intercept = b.at("intercept").get<double>();
      band.slope = vector_from(b.at("slope"));
      band.half_width = b.at("half_width").get<double>();
      report.bands.push_back(std::move(band));
    }
    for (const auto& r : j.at("rows")) {
      RowRecord row;
      row.index = r.at("index").get<int>();
      row.label = r.at("label").get<int>();
      row.trimmed = r.at("trimmed").get<int>();
      row.max_posterior = r.at("max_posterior").get<double>();
      report.rows.push_back(row);
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad report JSON: ") +
                                           e.what());
  }
}

bool report_equal(const RunReport& a, const RunReport& b) {
  if (a.method != b.method) return false;
  const FitConfig& ca = a.config;
  const FitConfig& cb = b.config;
  if (ca.n_groups != cb.n_groups || ca.alpha != cb.alpha ||
      ca.c_x != cb.c_x || ca.c_eps != cb.c_eps ||
      ca.n_starts != cb.n_starts || ca.max_iter != cb.max_iter ||
      ca.rel_tol != cb.rel_tol || ca.seed != cb.seed) {
    return false;
  }
  if (a.objective != b.objective || a.n_iter != b.n_iter ||
      a.converged != b.converged || a.start_index != b.start_index) {
    return false;
  }
  if (a.method == "mixreg") {
    const MixRegParams& pa = a.mixreg_params;
    const MixRegParams& pb = b.mixreg_params;
    if (!equal(pa.weights, pb.weights) ||
        !equal(pa.intercepts, pb.intercepts) ||
        !equal_seq(pa.slopes, pb.slopes) ||
        !equal(pa.noise_vars, pb.noise_vars)) {
      return false;
    }
  } else {
    const ModelParams& pa = a.params;
    const ModelParams& pb = b.params;
    if (!equal(pa.weights, pb.weights) || !equal_seq(pa.means, pb.means) ||
        !equal_seq(pa.scatters, pb.scatters) ||
        !equal(pa.intercepts, pb.intercepts) ||
        !equal_seq(pa.slopes, pb.slopes) ||
        !equal(pa.noise_vars, pb.noise_vars)) {
      return false;
    }
  }
  if (a.labels != b.labels || a.z != b.z) return false;
  if (a.bands.size() != b.bands.size() || a.rows.size() != b.rows.size()) {
    return false;
  }
  for (std::size_t g = 0; g < a.bands.size(); ++g) {
    if (a.bands[g].intercept != b.bands[g].intercept ||
        !equal(a.bands[g].slope, b.bands[g].slope) ||
        a.bands[g].half_width != b.bands[g].half_width) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].index != b.rows[i].index ||
        a.rows[i].label != b.rows[i].label ||
        a.rows[i].trimmed != b.rows[i].trimmed ||
        a.rows[i].max_posterior != b.rows[i].max_posterior) {
      return false;
    }
  }
  return true;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  json j;
  j["schema"] = 1;
  json comps = json::array();
  for (const auto& comp : spec.components) {
    comps.push_back(json{{"weight", comp.weight},
                         {"mean", to_json(comp.mean)},
                         {"scatter", to_json(comp.scatter)},
                         {"intercept", comp.intercept},
                         {"slope", to_json(comp.slope)},
                         {"noise_var", comp.noise_var}});
  }
  j["components"] = comps;
  j["n_clean"] = spec.n_clean;
  j["fixed_counts"] = spec.fixed_counts;
  json contams = json::array();
  for (const auto& c : spec.contamination) {
    json jc;
    jc["kind"] = kind_name(c.kind);
    jc["count"] = c.count;
    switch (c.kind) {
      case ContaminationKind::BackgroundBox:
        jc["box_lower"] = to_json(c.box_lower);
        jc["box_upper"] = to_json(c.box_upper);
        break;
      case ContaminationKind::Pointwise:
        jc["location"] = to_json(c.location);
        jc["spread"] = c.spread;
        break;
      case ContaminationKind::CollinearX:
        jc["line_anchor"] = to_json(c.line_anchor);
        jc["line_direction"] = to_json(c.line_direction);
        jc["line_jitter"] = c.line_jitter;
        jc["response_intercept"] = c.response_intercept;
        jc["response_slope"] = to_json(c.response_slope);
        jc["response_jitter"] = c.response_jitter;
        break;
      case ContaminationKind::ExactFitXY:
        jc["box_lower"] = to_json(c.box_lower);
        jc["box_upper"] = to_json(c.box_upper);
        jc["response_level"] = c.response_level;
        jc["response_jitter"] = c.response_jitter;
        break;
    }
    contams.push_back(std::move(jc));
  }
  j["contamination"] = contams;
  j["seed"] = spec.seed;
  return j.dump(2);
}

ScenarioSpec parse_scenario(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<int>() != 1) {
      throw Error(ErrorCode::ParseError, "unsupported scenario schema");
    }
    ScenarioSpec spec;
    for (const auto& jc : j.at("components")) {
      ComponentSpec comp;
      comp.weight = jc.at("weight").get<double>();
      comp.mean = vector_from(jc.at("mean"));
      comp.scatter = matrix_from(jc.at("scatter"));
      comp.intercept = jc.at("intercept").get<double>();
      comp.slope = vector_from(jc.at("slope"));
      comp.noise_var = jc.at("noise_var").get<double>();
      spec.components.push_back(std::move(comp));
    }
    spec.n_clean = j.at("n_clean").get<int>();
    if (j.contains("fixed_counts")) {
      spec.fixed_counts = j.at("fixed_counts").get<std::vector<int>>();
    }
    if (j.contains("contamination")) {
      for (const auto& jc : j.at("contamination")) {
        ContaminationSpec c;
        c.kind = kind_from_name(jc.at("kind").get<std::string>());
        c.count = jc.at("count").get<int>();
        switch (c.kind) {
          case ContaminationKind::BackgroundBox:
            c.box_lower = vector_from(jc.at("box_lower"));
            c.box_upper = vector_from(jc.at("box_upper"));
            break;
          case ContaminationKind::Pointwise:
            c.location = vector_from(jc.at("location"));
            c.spread = jc.at("spread").get<double>();
            break;
          case ContaminationKind::CollinearX:
            c.line_anchor = vector_from(jc.at("line_anchor"));
            c.line_direction = vector_from(jc.at("line_direction"));
            c.line_jitter = jc.value("line_jitter", 0.0);
            c.response_intercept = jc.value("response_intercept", 0.0);
            c.response_slope = vector_from(jc.at("response_slope"));
            c.response_jitter = jc.value("response_jitter", 0.0);
            break;
          case ContaminationKind::ExactFitXY:
            c.box_lower = vector_from(jc.at("box_lower"));
            c.box_upper = vector_from(jc.at("box_upper"));
            c.response_level = jc.at("response_level").get<double>();
            c.response_jitter = jc.value("response_jitter", 0.0);
            break;
        }
        spec.contamination.push_back(std::move(c));
      }
    }
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad scenario JSON: ") +
                                           e.what());
  }
}

}  // namespace cwrm
