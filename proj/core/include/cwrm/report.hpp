#pragma once

#include <string>
#include <vector>

#include "cwrm/datagen.hpp"
#include "cwrm/mixreg.hpp"
#include "cwrm/types.hpp"

namespace cwrm {

// Fitted regression band: the line plus a +-2 sigma half width, enough to
// draw the component without re-deriving anything from the parameters.
struct BandRow {
  double intercept = 0.0;
  VectorXd slope;
  double half_width = 0.0;  // 2 * sigma_g
};

struct RowRecord {
  int index = 0;    // 0-based input row
  int label = 0;    // 0 = trimmed, else component
  int trimmed = 0;  // 1 when the row was discarded
  double max_posterior = 0.0;
};

// Everything one fit run produced, serializable to versioned JSON
// ("schema": 1) that parses back to an identical report (wall time is
// carried but excluded from equality).
struct RunReport {
  std::string method = "cwrm";  // "cwrm" or "mixreg"
  FitConfig config;
  ModelParams params;           // filled when method == "cwrm"
  MixRegParams mixreg_params;   // filled when method == "mixreg"
  std::vector<int> labels;
  std::vector<int> z;
  double objective = 0.0;
  int n_iter = 0;
  bool converged = false;
  int start_index = -1;
  double wall_time_sec = 0.0;
  std::vector<BandRow> bands;
  std::vector<RowRecord> rows;
};

RunReport make_report(const Dataset& dataset, const FitConfig& config,
                      const TrimmedFit& fit);
RunReport make_report(const Dataset& dataset, const FitConfig& config,
                      const MixRegFit& fit);

std::string serialize_report(const RunReport& report);
RunReport parse_report(const std::string& text);

// Field-by-field equality ignoring wall_time_sec.
bool report_equal(const RunReport& a, const RunReport& b);

// Scenario specs share the JSON surface so simulate/evaluate can read the
// same file a user writes by hand.
std::string serialize_scenario(const ScenarioSpec& spec);
ScenarioSpec parse_scenario(const std::string& text);

}  // namespace cwrm
