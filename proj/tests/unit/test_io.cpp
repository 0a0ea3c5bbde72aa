#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "cwrm/csv.hpp"
#include "cwrm/datagen.hpp"
#include "cwrm/em.hpp"
#include "cwrm/errors.hpp"
#include "cwrm/mixreg.hpp"
#include "cwrm/report.hpp"

using namespace cwrm;

TEST_CASE("csv writer quotes what the reader must restore") {
  CsvTable table;
  table.header = {"name", "note"};
  table.rows = {{"a,b", "say \"hi\""}, {"line\nbreak", ""}, {"plain", "x"}};

  std::ostringstream out;
  write_csv(out, table);
  std::istringstream in(out.str());
  const CsvTable back = read_csv(in, true);

  CHECK(back.header == table.header);
  CHECK(back.rows == table.rows);
}

TEST_CASE("unterminated quote is a parse error") {
  std::istringstream in("a,\"unclosed\nb,c\n");
  try {
    read_csv(in, false);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("dataset reader resolves response and label columns") {
  const std::string text =
      "x_1,y,true_label\n"
      "1.5,2.5,1\n"
      "-0.5,0.25,0\n"
      "3.0,7.5,2\n";

  SUBCASE("default response is the last non-label column") {
    std::istringstream in(text);
    const Dataset ds = read_dataset_csv(in, true);
    REQUIRE(ds.n() == 3);
    REQUIRE(ds.d() == 1);
    CHECK(ds.x(0, 0) == 1.5);
    CHECK(ds.y[1] == 0.25);
    REQUIRE(ds.true_labels.size() == 3);
    CHECK(ds.true_labels[0] == 1);
    CHECK(ds.true_labels[1] == 0);
    CHECK(ds.true_labels[2] == 2);
  }

  SUBCASE("response by name flips the roles") {
    std::istringstream in(text);
    const Dataset ds = read_dataset_csv(in, true, "x_1");
    CHECK(ds.y[0] == 1.5);
    CHECK(ds.x(0, 0) == 2.5);
  }

  SUBCASE("response by index works when the name does not match") {
    std::istringstream in(text);
    const Dataset ds = read_dataset_csv(in, true, "0");
    CHECK(ds.y[2] == 3.0);
    CHECK(ds.x(2, 0) == 7.5);
  }

  SUBCASE("the label column cannot serve as response") {
    std::istringstream in(text);
    try {
      read_dataset_csv(in, true, "true_label");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
}

TEST_CASE("dataset reader reports ragged and non-numeric rows precisely") {
  std::istringstream ragged(
      "x_1,x_2,y\n"
      "1,2,3\n"
      "4,5\n");
  try {
    read_dataset_csv(ragged, true);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("has 2 fields, expected 3") !=
          std::string::npos);
  }

  std::istringstream alpha(
      "x_1,y\n"
      "1,2\n"
      "oops,4\n");
  try {
    read_dataset_csv(alpha, true);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
}

TEST_CASE("headerless input selects the response by position") {
  std::istringstream in("1,10\n2,20\n3,30\n4,40\n");
  const Dataset ds = read_dataset_csv(in, false);
  REQUIRE(ds.n() == 4);
  REQUIRE(ds.d() == 1);
  CHECK(ds.true_labels.empty());
  CHECK(ds.y[3] == 40.0);
  CHECK(ds.x(3, 0) == 4.0);
}

TEST_CASE("dataset files survive a write and read cycle unchanged") {
  const Dataset ds = generate(preset("simdata1"));
  std::ostringstream out;
  write_dataset_csv(out, ds);
  std::istringstream in(out.str());
  const Dataset back = read_dataset_csv(in, true);

  REQUIRE(back.n() == ds.n());
  REQUIRE(back.d() == ds.d());
  CHECK((back.x.array() == ds.x.array()).all());
  CHECK((back.y.array() == ds.y.array()).all());
  CHECK(back.true_labels == ds.true_labels);
}

TEST_CASE("fit reports round trip through their text form") {
  Dataset ds = generate(preset("simdata1"));
  FitConfig config;
  config.n_groups = 2;
  config.alpha = 0.1;
  config.c_x = 20.0;
  config.c_eps = 20.0;
  config.n_starts = 4;
  config.max_iter = 60;
  config.seed = 7;

  SUBCASE("full model") {
    const TrimmedFit fit = cwrm::fit(ds, config);
    RunReport report = make_report(ds, config, fit);
    report.wall_time_sec = 1.25;
    const std::string text = serialize_report(report);
    const RunReport back = parse_report(text);
    CHECK(report_equal(report, back));
    CHECK(back.wall_time_sec == 1.25);
    CHECK(back.method == "cwrm");
    CHECK(back.rows.size() == static_cast<std::size_t>(ds.n()));

    RunReport tweaked = back;
    tweaked.objective += 1e-9;
    CHECK_FALSE(report_equal(report, tweaked));
  }

  SUBCASE("regression-only model") {
    const MixRegFit fit = fit_trimmed_mixreg(ds, config);
    const RunReport report = make_report(ds, config, fit);
    const RunReport back = parse_report(serialize_report(report));
    CHECK(report_equal(report, back));
    CHECK(back.method == "mixreg");
    CHECK(back.labels == report.labels);
  }
}

TEST_CASE("scenario specs round trip and regenerate the same data") {
  const ScenarioSpec spec = preset("simdata2");
  const ScenarioSpec back = parse_scenario(serialize_scenario(spec));
  const Dataset a = generate(spec);
  const Dataset b = generate(back);
  REQUIRE(a.n() == b.n());
  CHECK((a.x.array() == b.x.array()).all());
  CHECK((a.y.array() == b.y.array()).all());
  CHECK(a.true_labels == b.true_labels);
}
