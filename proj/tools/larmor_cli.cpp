// Command-line scenario runner: single-point clock computations, parameter
// sweeps, and the invariant validation suite. All I/O is in natural units
// (hbar = c = 1, energies in mc^2); --si converts displayed times/lengths
// using a user-supplied rest mass in MeV/c^2.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "larmor/scenario.hpp"
#include "larmor/validation.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitValidation = 4;

constexpr double kHbarMeVs = 6.582119569e-22;   // MeV s
constexpr double kHbarCMeVfm = 197.3269804;     // MeV fm

void print_si_note(double mass_mev) {
  const double t_unit = kHbarMeVs / mass_mev;
  const double l_unit = kHbarCMeVfm / mass_mev;
  std::printf("# SI conversion for m = %g MeV/c^2: 1 time unit = %.9e s, "
              "1 length unit = %.9e fm\n",
              mass_mev, t_unit, l_unit);
}

int cmd_run(const std::string& config_path, const std::string& csv_path,
            double si_mass) {
  larmor::ScenarioConfig config;
  try {
    config = larmor::load_config(config_path);
  } catch (const larmor::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  larmor::OutputRecord rec;
  try {
    rec = larmor::compute_record(config);
  } catch (const larmor::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "config error: cannot write " << csv_path << "\n";
      return kExitConfig;
    }
    out << larmor::csv_header() << "\n" << larmor::csv_row(rec) << "\n";
  } else {
    if (si_mass > 0.0) print_si_note(si_mass);
    std::cout << larmor::record_to_json(rec).dump(2) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              double start, double stop, std::size_t count, bool log_spacing,
              const std::string& out_path) {
  larmor::ScenarioConfig config;
  larmor::SweepSpec spec;
  try {
    config = larmor::load_config(config_path);
    spec.axis = larmor::SweepSpec::parse_axis(axis);
    spec.start = start;
    spec.stop = stop;
    spec.count = count;
    spec.log_spacing = log_spacing;
    (void)spec.values();  // validate range now, before any solve
  } catch (const larmor::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<larmor::OutputRecord> rows;
  try {
    rows = larmor::run_sweep(config, spec);
  } catch (const larmor::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const larmor::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "config error: cannot write " << out_path << "\n";
      return kExitConfig;
    }
    out = &file;
  }
  *out << larmor::csv_header() << "\n";
  for (const larmor::OutputRecord& rec : rows) *out << larmor::csv_row(rec) << "\n";
  return 0;
}

int cmd_validate(bool as_json) {
  const std::vector<larmor::validation::SuiteResult> results =
      larmor::validation::run_all();
  bool all_passed = true;
  if (as_json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : results) {
      doc.push_back({{"suite", r.name},
                     {"passed", r.passed},
                     {"cases", r.cases},
                     {"max_residual", r.max_residual},
                     {"tolerance", r.tolerance},
                     {"note", r.note}});
      all_passed = all_passed && r.passed;
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::printf("%-24s %s  cases=%zu  max_residual=%.3e  tol=%.1e%s%s\n",
                  r.name.c_str(), r.passed ? "PASS" : "FAIL", r.cases,
                  r.max_residual, r.tolerance, r.note.empty() ? "" : "  ",
                  r.note.c_str());
      all_passed = all_passed && r.passed;
    }
  }
  return all_passed ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relativistic tunneling clock times for a neutral spin-1/2 "
               "particle crossing a 1D barrier with a confined magnetic field"};
  app.require_subcommand(1);

  std::string config_path, csv_path, out_path, axis;
  double start = 0.0, stop = 0.0, si_mass = 0.0;
  std::size_t count = 0;
  bool log_spacing = false, as_json = false;

  CLI::App* run = app.add_subcommand("run", "Solve a single scenario");
  run->add_option("config", config_path, "JSON scenario config")->required();
  run->add_option("--csv", csv_path, "write a one-row CSV instead of JSON");
  run->add_option("--si", si_mass,
                  "annotate output with SI units for this rest mass (MeV/c^2)");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter axis");
  sweep->add_option("config", config_path, "JSON scenario config")->required();
  sweep->add_option("--axis", axis, "one of E, d, U0, V, n_segments")->required();
  sweep->add_option("--start", start)->required();
  sweep->add_option("--stop", stop)->required();
  sweep->add_option("--count", count)->required();
  sweep->add_flag("--log", log_spacing, "logarithmic spacing");
  sweep->add_option("-o,--output", out_path, "CSV output file (default stdout)");

  CLI::App* validate = app.add_subcommand("validate", "Run the invariant suite");
  validate->add_flag("--json", as_json, "machine-readable report");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, csv_path, si_mass);
  if (sweep->parsed())
    return cmd_sweep(config_path, axis, start, stop, count, log_spacing, out_path);
  return cmd_validate(as_json);
}
