#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "larmor/scenario.hpp"

using namespace larmor;
using nlohmann::json;

namespace {

json rect_config(double E, double U0, double d) {
  return json{{"particle", {{"E", E}}},
              {"barrier", {{"kind", "rectangular"}, {"U0", U0}, {"d", d}}}};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LARMOR_CLI_PATH) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("parse_config: defaults and field errors name the field") {
  const ScenarioConfig cfg = parse_config(rect_config(1.2, 1.0, 1.0));
  CHECK(cfg.m == 1.0);
  CHECK(cfg.V == 0.0);
  CHECK(cfg.theta == doctest::Approx(M_PI / 2.0));
  CHECK(cfg.n_segments == 1024);

  const auto expect_error = [](json doc, const char* needle) {
    try {
      parse_config(doc);
      FAIL_CHECK("expected ConfigError mentioning " << needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_error(json::object(), "particle");
  json bad = rect_config(1.2, 1.0, 1.0);
  bad["particle"].erase("E");
  expect_error(bad, "particle.E");
  expect_error(rect_config(0.8, 1.0, 1.0), "particle.E");
  expect_error(rect_config(1.2, -1.0, 1.0), "barrier.U0");
  expect_error(rect_config(1.2, 1.0, 0.0), "barrier.d");
  bad = rect_config(1.2, 1.0, 1.0);
  bad["barrier"]["kind"] = "triangular";
  expect_error(bad, "barrier.kind");
  bad = rect_config(1.2, 1.0, 1.0);
  bad["field"] = {{"V", -0.1}};
  expect_error(bad, "field.V");
  bad = rect_config(1.2, 1.0, 1.0);
  bad["numerics"] = {{"n_segments", 0}};
  expect_error(bad, "numerics.n_segments");
  bad = rect_config(1.2, 1.0, 1.0);
  bad["spin"] = {{"theta", 4.0}};
  expect_error(bad, "spin.theta");
}

TEST_CASE("parse_config: piecewise and sampled barriers") {
  json doc{{"particle", {{"E", 1.3}}},
           {"barrier",
            {{"kind", "piecewise"}, {"segments", {{0.5, 1.0}, {0.5, 0.5}}}}}};
  const ScenarioConfig pw = parse_config(doc);
  CHECK(pw.segments.size() == 2);
  CHECK(pw.barrier().segments.size() == 2);

  json sampled{{"particle", {{"E", 1.3}}},
               {"barrier",
                {{"kind", "sampled"},
                 {"points", {{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}}}}};
  const ScenarioConfig sp = parse_config(sampled);
  CHECK(sp.sample_x.size() == 3);
  CHECK(sp.barrier().segments.size() == 1024);
}

TEST_CASE("compute_record: values consistent with the core library") {
  ScenarioConfig cfg = parse_config(rect_config(1.2, 1.0, 1.0));
  const OutputRecord rec = compute_record(cfg, 7.0);
  CHECK(rec.axis_value == 7.0);
  CHECK(rec.tau_T == doctest::Approx(0.6937730578522657).epsilon(1e-8));
  CHECK(rec.tau_L == doctest::Approx(rec.tau_D).epsilon(1e-6));
  CHECK(rec.tau_free == doctest::Approx(3.618136134933163).epsilon(1e-12));
  CHECK(rec.unitarity_residual < 1e-12);
  CHECK(rec.converged);
  CHECK(rec.alpha == doctest::Approx(std::arg(rec.T)));
}

TEST_CASE("csv: header layout and full-precision round trip") {
  CHECK(csv_header() ==
        "axis_value,E,m,V,theta,phi,n_segments,T_re,T_im,R_re,R_im,alpha,beta,"
        "tau_T,tau_R,tau_L,tau_D,tau_free,s1,s2,s3,unitarity_residual,converged");

  const ScenarioConfig cfg = parse_config(rect_config(1.2, 1.0, 1.0));
  const OutputRecord rec = compute_record(cfg);
  const std::string row = csv_row(rec);

  std::stringstream ss(row);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() == 23);
  CHECK(std::stod(cells[7]) == rec.T.real());
  CHECK(std::stod(cells[13]) == rec.tau_T);
  CHECK(std::stod(cells[16]) == rec.tau_D);
  CHECK(cells[22] == "1");
}

TEST_CASE("sweep: value grids") {
  SweepSpec spec;
  spec.axis = SweepSpec::Axis::d;
  spec.start = 1.0;
  spec.stop = 2.0;
  spec.count = 5;
  const std::vector<double> lin = spec.values();
  CHECK(lin.front() == 1.0);
  CHECK(lin.back() == 2.0);
  CHECK(lin[2] == doctest::Approx(1.5));

  spec.log_spacing = true;
  spec.stop = 100.0;
  spec.count = 3;
  const std::vector<double> lg = spec.values();
  CHECK(lg[1] == doctest::Approx(10.0));

  spec.count = 1;
  CHECK_THROWS_AS(spec.values(), ConfigError);
  spec.count = 3;
  spec.start = -1.0;
  CHECK_THROWS_AS(spec.values(), ConfigError);
}

TEST_CASE("sweep: deterministic across thread counts") {
  const ScenarioConfig cfg = parse_config(rect_config(1.2, 1.0, 1.0));
  SweepSpec spec;
  spec.axis = SweepSpec::Axis::E;
  spec.start = 1.1;
  spec.stop = 1.9;
  spec.count = 12;

  const std::vector<OutputRecord> one = run_sweep(cfg, spec, 1);
  const std::vector<OutputRecord> two = run_sweep(cfg, spec, 2);
  REQUIRE(one.size() == 12);
  REQUIRE(two.size() == 12);
  for (std::size_t i = 0; i < one.size(); ++i)
    CHECK(csv_row(one[i]) == csv_row(two[i]));
}

TEST_CASE("sweep: resonance row carries NaN tau_R but tau_L = tau_D") {
  const ScenarioConfig cfg = parse_config(rect_config(1.2, 1.0, 1.0));
  SweepSpec spec;
  spec.axis = SweepSpec::Axis::E;
  const double e_res = std::sqrt(4.0 + M_PI * M_PI / 4.0);
  spec.start = e_res - 1e-9;
  spec.stop = e_res + 1e-9;
  spec.count = 3;
  const std::vector<OutputRecord> rows = run_sweep(cfg, spec, 1);
  const OutputRecord& mid = rows[1];
  CHECK(std::isnan(mid.tau_R));
  CHECK(mid.tau_L == doctest::Approx(mid.tau_D).epsilon(1e-6));
}

TEST_CASE("sweep: per-point failure yields a NaN row, not an abort") {
  const ScenarioConfig cfg = parse_config(rect_config(1.2, 1.0, 1.0));
  SweepSpec spec;
  spec.axis = SweepSpec::Axis::E;
  spec.start = 1.0;  // first point sits exactly at E = m
  spec.stop = 1.5;
  spec.count = 2;
  const std::vector<OutputRecord> rows = run_sweep(cfg, spec, 1);
  REQUIRE(rows.size() == 2);
  CHECK(std::isnan(rows[0].tau_T));
  CHECK_FALSE(rows[0].converged);
  CHECK(rows[1].converged);
}

TEST_CASE("cli: exit codes") {
  const std::string good =
      write_temp("larmor_good.json", rect_config(1.2, 1.0, 1.0).dump());
  CHECK(run_cli("run " + good) == 0);
  CHECK(run_cli("run " + good + " --csv /tmp/larmor_row.csv") == 0);

  const std::string bad_json = write_temp("larmor_bad.json", "{ not json");
  CHECK(run_cli("run " + bad_json) == 2);
  CHECK(run_cli("run /tmp/larmor_missing_config.json") == 2);

  const std::string sub_rest =
      write_temp("larmor_subrest.json", rect_config(0.5, 1.0, 1.0).dump());
  CHECK(run_cli("run " + sub_rest) == 2);

  // valid config, solver failure: E exactly at the interior band edge
  const std::string threshold =
      write_temp("larmor_threshold.json", rect_config(2.0, 1.0, 1.0).dump());
  CHECK(run_cli("run " + threshold) == 3);

  CHECK(run_cli("sweep " + good + " --axis bogus --start 1 --stop 2 --count 3") == 2);
  CHECK(run_cli("sweep " + good + " --axis E --start 2 --stop 1 --count 3") == 2);
  CHECK(run_cli("sweep " + good +
                " --axis d --start 0.5 --stop 1.5 --count 3 -o /tmp/larmor_sweep.csv") == 0);

  std::ifstream sweep_out("/tmp/larmor_sweep.csv");
  std::string header;
  std::getline(sweep_out, header);
  CHECK(header == csv_header());
}
