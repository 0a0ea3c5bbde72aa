// Command-line front end: fit, simulate, evaluate, sweep.
//
// Exit codes: 0 success, 2 parse error (bad CSV/JSON/flags), 3 validation
// error, 4 when every start of a fit failed. Messages go to stderr; the
// requested artifact (JSON report, CSV dataset or table) goes to stdout or
// --out.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwrm/constraints.hpp"
#include "cwrm/csv.hpp"
#include "cwrm/datagen.hpp"
#include "cwrm/em.hpp"
#include "cwrm/metrics.hpp"
#include "cwrm/mixreg.hpp"
#include "cwrm/oracle.hpp"
#include "cwrm/parallel.hpp"
#include "cwrm/report.hpp"

namespace {

using namespace cwrm;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot open " + out_path);
  }
  out << text;
}

struct CommonOpts {
  std::string input;
  std::string preset_name;
  std::string spec_path;
  std::string out;
  std::string response;
  bool no_header = false;
};

Dataset load_input(const CommonOpts& opts) {
  int sources = 0;
  sources += !opts.input.empty();
  sources += !opts.preset_name.empty();
  sources += !opts.spec_path.empty();
  if (sources != 1) {
    throw Error(ErrorCode::BadConfig,
                "need exactly one input: a CSV path, --preset or --spec");
  }
  if (!opts.preset_name.empty()) {
    return generate(preset(opts.preset_name));
  }
  if (!opts.spec_path.empty()) {
    return generate(parse_scenario(read_file(opts.spec_path)));
  }
  return read_dataset_csv_file(opts.input, !opts.no_header, opts.response);
}

struct FitOpts {
  CommonOpts common;
  FitConfig config;
  std::string method = "cwrm";
  std::string rows_path;
};

void add_fit_flags(CLI::App* cmd, FitOpts& opts) {
  cmd->add_option("input", opts.common.input, "Input CSV file");
  cmd->add_option("--preset", opts.common.preset_name,
                  "Generate the input from a named scenario");
  cmd->add_option("--spec", opts.common.spec_path,
                  "Generate the input from a scenario JSON file");
  cmd->add_option("--groups", opts.config.n_groups, "Number of components");
  cmd->add_option("--alpha", opts.config.alpha, "Trimming level in [0,1)");
  cmd->add_option("--cx", opts.config.c_x,
                  "Eigenvalue ratio bound for covariate scatters");
  cmd->add_option("--ceps", opts.config.c_eps,
                  "Variance ratio bound for regression noise");
  cmd->add_option("--starts", opts.config.n_starts, "Random starts");
  cmd->add_option("--max-iter", opts.config.max_iter,
                  "Iteration cap per start");
  cmd->add_option("--tol", opts.config.rel_tol,
                  "Relative objective change for convergence");
  cmd->add_option("--seed", opts.config.seed, "Random seed");
  cmd->add_option("--method", opts.method, "Model: cwrm or mixreg")
      ->check(CLI::IsMember({"cwrm", "mixreg"}));
  cmd->add_option("--out", opts.common.out,
                  "Write the report here instead of stdout");
  cmd->add_option("--rows", opts.rows_path,
                  "Write the per-row CSV here (default: <out>.rows.csv)");
  cmd->add_option("--response", opts.common.response,
                  "Response column name or 0-based index (default: last)");
  cmd->add_flag("--no-header", opts.common.no_header,
                "Input CSV has no header row");
}

std::string rows_csv(const RunReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "index,label,trimmed,max_posterior\n";
  for (const auto& row : report.rows) {
    out << row.index << ',' << row.label << ',' << row.trimmed << ','
        << row.max_posterior << '\n';
  }
  return out.str();
}

int run_fit(const FitOpts& opts) {
  const Dataset dataset = load_input(opts.common);
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  if (opts.method == "mixreg") {
    const MixRegFit fit = fit_trimmed_mixreg(dataset, opts.config);
    report = make_report(dataset, opts.config, fit);
  } else {
    const TrimmedFit result = fit(dataset, opts.config);
    report = make_report(dataset, opts.config, result);
  }
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_time_sec =
      std::chrono::duration<double>(t1 - t0).count();
  write_output(serialize_report(report), opts.common.out);
  std::string rows_path = opts.rows_path;
  if (rows_path.empty() && !opts.common.out.empty()) {
    rows_path = opts.common.out + ".rows.csv";
  }
  if (!rows_path.empty()) {
    write_output(rows_csv(report), rows_path);
  }
  return 0;
}

struct SimulateOpts {
  std::string preset_name;
  std::string spec_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool list_presets = false;
};

int run_simulate(const SimulateOpts& opts) {
  if (opts.list_presets) {
    std::ostringstream out;
    for (const auto& name : preset_names()) out << name << '\n';
    write_output(out.str(), opts.out);
    return 0;
  }
  if (opts.preset_name.empty() == opts.spec_path.empty()) {
    throw Error(ErrorCode::BadConfig,
                "need exactly one of --preset or --spec");
  }
  ScenarioSpec spec = opts.preset_name.empty()
                          ? parse_scenario(read_file(opts.spec_path))
                          : preset(opts.preset_name);
  if (opts.seed_given) spec.seed = opts.seed;
  const Dataset dataset = generate(spec);
  std::ostringstream out;
  write_dataset_csv(out, dataset);
  write_output(out.str(), opts.out);
  return 0;
}

struct EvaluateOpts {
  CommonOpts common;
  std::string report_path;
};

int run_evaluate(const EvaluateOpts& opts) {
  if (opts.common.input.empty()) {
    throw Error(ErrorCode::BadConfig, "evaluate needs a CSV input path");
  }
  const Dataset dataset = read_dataset_csv_file(
      opts.common.input, !opts.common.no_header, opts.common.response);
  if (dataset.true_labels.empty()) {
    throw Error(ErrorCode::BadConfig,
                "evaluate needs a true_label column in the input");
  }
  const RunReport report = parse_report(read_file(opts.report_path));
  const EvalMetrics metrics = evaluate_labels(
      dataset.true_labels, report.labels, report.config.n_groups);
  json j;
  j["schema"] = 1;
  j["contamination_recall"] = metrics.contamination_recall;
  j["false_trim_rate"] = metrics.false_trim_rate;
  j["clean_classification_error"] = metrics.clean_classification_error;
  j["n_rows"] = metrics.n_rows;
  j["n_contaminated"] = metrics.n_contaminated;
  j["n_clean_untrimmed"] = metrics.n_clean_untrimmed;
  j["label_map"] = metrics.label_map;
  if (!opts.common.spec_path.empty()) {
    const ScenarioSpec truth = parse_scenario(read_file(opts.common.spec_path));
    ModelParams params = report.params;
    const bool mixreg = report.method == "mixreg";
    if (mixreg) {
      const int d = truth.components.empty()
                        ? 0
                        : static_cast<int>(truth.components[0].mean.size());
      params = ModelParams{};
      params.weights = report.mixreg_params.weights;
      params.intercepts = report.mixreg_params.intercepts;
      params.slopes = report.mixreg_params.slopes;
      params.noise_vars = report.mixreg_params.noise_vars;
      for (int g = 0; g < static_cast<int>(params.weights.size()); ++g) {
        params.means.push_back(VectorXd::Zero(d));
        params.scatters.push_back(MatrixXd::Identity(d, d));
      }
    }
    json errs = json::array();
    for (const auto& err :
         parameter_errors(params, truth, metrics.label_map)) {
      json je;
      if (!mixreg) je["mean_abs_err"] = err.mean_abs_err;
      je["slope_abs_err"] = err.slope_abs_err;
      je["intercept_abs_err"] = err.intercept_abs_err;
      je["noise_var_abs_err"] = err.noise_var_abs_err;
      errs.push_back(std::move(je));
    }
    j["parameter_errors"] = errs;
  }
  write_output(j.dump(2), opts.common.out);
  return 0;
}

struct SweepOpts {
  CommonOpts common;
  FitConfig base;
  std::string method = "cwrm";
  std::vector<double> alphas{0.0};
  std::vector<double> cxs{0.0};   // 0 sentinel: use base config value
  std::vector<double> cepss{0.0};
  bool cxs_given = false, cepss_given = false, alphas_given = false;
};

struct SweepCell {
  double alpha = 0.0, c_x = 0.0, c_eps = 0.0;
  double objective = 0.0;
  int retained = 0, n_iter = 0;
  bool converged = false, failed = false;
  EvalMetrics metrics;
};

int run_sweep(const SweepOpts& opts) {
  const Dataset dataset = load_input(opts.common);
  std::vector<double> alphas = opts.alphas_given
                                   ? opts.alphas
                                   : std::vector<double>{opts.base.alpha};
  std::vector<double> cxs =
      opts.cxs_given ? opts.cxs : std::vector<double>{opts.base.c_x};
  std::vector<double> cepss =
      opts.cepss_given ? opts.cepss : std::vector<double>{opts.base.c_eps};
  if (alphas.empty() || cxs.empty() || cepss.empty()) {
    throw Error(ErrorCode::BadConfig, "sweep grid is empty");
  }
  std::vector<SweepCell> cells;
  for (double alpha : alphas) {
    for (double c_x : cxs) {
      for (double c_eps : cepss) {
        SweepCell cell;
        cell.alpha = alpha;
        cell.c_x = c_x;
        cell.c_eps = c_eps;
        cells.push_back(cell);
      }
    }
  }
  const bool have_truth = !dataset.true_labels.empty();
  const int n_cells = static_cast<int>(cells.size());
  const int n_threads = resolve_thread_count(0, n_cells);
  parallel_for(n_cells, n_threads, [&](int idx) {
    SweepCell& cell = cells[idx];
    FitConfig config = opts.base;
    config.alpha = cell.alpha;
    config.c_x = cell.c_x;
    config.c_eps = cell.c_eps;
    try {
      std::vector<int> labels;
      if (opts.method == "mixreg") {
        const MixRegFit f = fit_trimmed_mixreg(dataset, config, nullptr, 1);
        cell.objective = f.objective;
        cell.retained = f.resp.retained();
        cell.n_iter = f.n_iter;
        cell.converged = f.converged;
        labels = f.labels;
      } else {
        const TrimmedFit f = fit(dataset, config, nullptr, 1);
        cell.objective = f.objective;
        cell.retained = f.resp.retained();
        cell.n_iter = f.n_iter;
        cell.converged = f.converged;
        labels = f.labels;
      }
      if (have_truth) {
        cell.metrics =
            evaluate_labels(dataset.true_labels, labels, config.n_groups);
      }
    } catch (const Error&) {
      cell.failed = true;
    }
  });
  std::ostringstream out;
  out.precision(12);
  out << "alpha,c_x,c_eps,objective,retained,n_iter,converged";
  if (have_truth) {
    out << ",contamination_recall,false_trim_rate,clean_classification_error";
  }
  out << '\n';
  for (const SweepCell& cell : cells) {
    out << cell.alpha << ',' << cell.c_x << ',' << cell.c_eps << ',';
    if (cell.failed) {
      out << "nan";
    } else {
      out << cell.objective;
    }
    out << ',' << cell.retained << ',' << cell.n_iter << ','
        << (cell.converged ? 1 : 0);
    if (have_truth) {
      if (cell.failed) {
        out << ",nan,nan,nan";
      } else {
        out << ',' << cell.metrics.contamination_recall << ','
            << cell.metrics.false_trim_rate << ','
            << cell.metrics.clean_classification_error;
      }
    }
    out << '\n';
  }
  write_output(out.str(), opts.common.out);
  return 0;
}

struct OracleOpts {
  CommonOpts common;
  std::string kind = "cwm_g1";
  double alpha = 0.0;
  std::vector<double> values;
  std::vector<double> weights;
  double c = 1.0;
  int grid = 100000;
};

int run_oracle(const OracleOpts& opts) {
  json j;
  if (opts.kind == "threshold") {
    if (opts.values.empty()) {
      throw Error(ErrorCode::BadConfig, "threshold oracle needs --values");
    }
    WeightedValues wv;
    wv.values = opts.values;
    wv.weights = opts.weights.empty()
                     ? std::vector<double>(opts.values.size(), 1.0)
                     : opts.weights;
    if (wv.weights.size() != wv.values.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "--weights must match --values in length");
    }
    wv.c = opts.c;
    const oracle::ThresholdResult grid = oracle::grid_threshold(wv, opts.grid);
    const double m = optimal_threshold(wv);
    j["grid_m"] = grid.m;
    j["grid_objective"] = grid.objective;
    j["solver_m"] = m;
    j["solver_objective"] = truncation_objective(wv, m);
  } else {
    if (opts.common.input.empty()) {
      throw Error(ErrorCode::BadConfig, "subset oracle needs a CSV input");
    }
    const Dataset dataset = read_dataset_csv_file(
        opts.common.input, !opts.common.no_header, opts.common.response);
    const oracle::SubsetResult result =
        opts.kind == "lts"
            ? oracle::exhaustive_lts(dataset, opts.alpha)
            : oracle::exhaustive_trimmed_cwm_g1(dataset, opts.alpha);
    j["objective"] = result.objective;
    j["retained"] = result.retained;
  }
  write_output(j.dump(2), opts.common.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust fitting of cluster-weighted regression models"};
  app.require_subcommand(1);

  FitOpts fit_opts;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Fit a trimmed model to a CSV dataset and report it as JSON");
  add_fit_flags(fit_cmd, fit_opts);

  SimulateOpts sim_opts;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Write a synthetic dataset as CSV");
  sim_cmd->add_option("--preset", sim_opts.preset_name, "Scenario name");
  sim_cmd->add_option("--spec", sim_opts.spec_path, "Scenario JSON file");
  auto* seed_opt =
      sim_cmd->add_option("--seed", sim_opts.seed, "Override the spec seed");
  sim_cmd->add_option("--out", sim_opts.out, "Output CSV path");
  sim_cmd->add_flag("--list", sim_opts.list_presets,
                    "List the preset names and exit");

  EvaluateOpts eval_opts;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Score a fit report against a labeled dataset");
  eval_cmd->add_option("input", eval_opts.common.input,
                       "CSV dataset with a true_label column");
  eval_cmd->add_option("--report", eval_opts.report_path, "Fit report JSON")
      ->required();
  eval_cmd->add_option("--spec", eval_opts.common.spec_path,
                       "Scenario JSON with the true parameters");
  eval_cmd->add_option("--out", eval_opts.common.out, "Output path");
  eval_cmd->add_option("--response", eval_opts.common.response,
                       "Response column name or index");
  eval_cmd->add_flag("--no-header", eval_opts.common.no_header,
                     "Input CSV has no header row");

  SweepOpts sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Fit a grid of alpha/cx/ceps values and tabulate the results");
  sweep_cmd->add_option("input", sweep_opts.common.input, "Input CSV file");
  sweep_cmd->add_option("--preset", sweep_opts.common.preset_name,
                        "Generate the input from a named scenario");
  sweep_cmd->add_option("--spec", sweep_opts.common.spec_path,
                        "Generate the input from a scenario JSON file");
  auto* alphas_opt = sweep_cmd
                         ->add_option("--alphas", sweep_opts.alphas,
                                      "Comma-separated trimming levels")
                         ->delimiter(',');
  auto* cxs_opt = sweep_cmd
                      ->add_option("--cxs", sweep_opts.cxs,
                                   "Comma-separated scatter ratio bounds")
                      ->delimiter(',');
  auto* cepss_opt = sweep_cmd
                        ->add_option("--cepss", sweep_opts.cepss,
                                     "Comma-separated noise ratio bounds")
                        ->delimiter(',');
  sweep_cmd->add_option("--groups", sweep_opts.base.n_groups,
                        "Number of components");
  sweep_cmd->add_option("--starts", sweep_opts.base.n_starts, "Random starts");
  sweep_cmd->add_option("--max-iter", sweep_opts.base.max_iter,
                        "Iteration cap per start");
  sweep_cmd->add_option("--tol", sweep_opts.base.rel_tol, "Convergence tol");
  sweep_cmd->add_option("--seed", sweep_opts.base.seed, "Random seed");
  sweep_cmd->add_option("--method", sweep_opts.method, "Model: cwrm or mixreg")
      ->check(CLI::IsMember({"cwrm", "mixreg"}));
  sweep_cmd->add_option("--out", sweep_opts.common.out, "Output path");
  sweep_cmd->add_option("--response", sweep_opts.common.response,
                        "Response column name or index");
  sweep_cmd->add_flag("--no-header", sweep_opts.common.no_header,
                      "Input CSV has no header row");

  // Debugging aid, hidden from --help: brute-force references against which
  // the fit and the threshold solver can be compared by hand.
  OracleOpts oracle_opts;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Brute-force reference computations");
  oracle_cmd->group("");
  oracle_cmd->add_option("input", oracle_opts.common.input,
                         "CSV dataset (cwm_g1 and lts kinds)");
  oracle_cmd->add_option("--kind", oracle_opts.kind, "Reference to compute")
      ->check(CLI::IsMember({"cwm_g1", "lts", "threshold"}));
  oracle_cmd->add_option("--alpha", oracle_opts.alpha, "Trimming level");
  oracle_cmd->add_option("--values", oracle_opts.values, "Values to clamp")
      ->delimiter(',');
  oracle_cmd->add_option("--weights", oracle_opts.weights, "Value weights")
      ->delimiter(',');
  oracle_cmd->add_option("--c", oracle_opts.c, "Ratio bound");
  oracle_cmd->add_option("--grid", oracle_opts.grid, "Grid points");
  oracle_cmd->add_option("--out", oracle_opts.common.out, "Output path");
  oracle_cmd->add_option("--response", oracle_opts.common.response,
                         "Response column name or index");
  oracle_cmd->add_flag("--no-header", oracle_opts.common.no_header,
                       "Input CSV has no header row");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(fit_cmd)) return run_fit(fit_opts);
    if (app.got_subcommand(sim_cmd)) {
      sim_opts.seed_given = seed_opt->count() > 0;
      return run_simulate(sim_opts);
    }
    if (app.got_subcommand(eval_cmd)) return run_evaluate(eval_opts);
    if (app.got_subcommand(sweep_cmd)) {
      sweep_opts.alphas_given = alphas_opt->count() > 0;
      sweep_opts.cxs_given = cxs_opt->count() > 0;
      sweep_opts.cepss_given = cepss_opt->count() > 0;
      return run_sweep(sweep_opts);
    }
    if (app.got_subcommand(oracle_cmd)) return run_oracle(oracle_opts);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what()
              << '\n';
    switch (e.code()) {
      case ErrorCode::ParseError: return 2;
      case ErrorCode::AllStartsFailed: return 4;
      default: return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
