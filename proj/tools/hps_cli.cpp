// Experiment runner: run <config>, sweep <config> --axis <name>, verify.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hps/error.hpp"
#include "hps/experiment.hpp"
#include "hps/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

hps::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                           const std::string& output_dir) {
  std::ifstream in(path);
  if (!in) throw hps::ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw hps::ConfigError(path + ": " + e.what());
  }
  j = hps::apply_overrides(j, overrides);
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  return hps::RunConfig::from_json(j);
}

template <class Scalar>
std::vector<hps::ResultRow> run_with_snapshot(const hps::ProblemSpec<Scalar>& spec, const hps::RunConfig& c) {
  const auto sim = hps::simulate(spec, c);
  if (c.snapshots) {
    const fs::path dir(c.output_dir);
    hps::write_snapshot(dir / (c.experiment + "_initial.txt"), sim.mesh,
                        hps::sample(sim.mesh, spec.initial, 0.0, spec.components), 0.0);
    hps::write_snapshot(dir / (c.experiment + "_final.txt"), sim.mesh, sim.final, sim.row.dt * sim.row.steps);
  }
  return {sim.row};
}

int cmd_run(const hps::RunConfig& c) {
  const auto rows = hps::is_complex_experiment(c.experiment) ? run_with_snapshot(hps::complex_problem(c), c)
                                                            : run_with_snapshot(hps::real_problem(c), c);
  const fs::path dir(c.output_dir);
  hps::write_results_csv(dir / "results.csv", rows, c);
  hps::write_timings_csv(dir / "timings.csv", rows, c);
  const auto& r = rows.front();
  std::cout << r.experiment << " q=" << r.q << " " << r.formulation << " " << r.n1 << "x" << r.n2 << " p=" << r.p
            << " dt=" << r.dt << " steps=" << r.steps << " final_error=" << r.final_error << " max_norm=" << r.max_norm
            << "\n";
  return 0;
}

int cmd_sweep(const hps::RunConfig& c, const std::string& axis) {
  const auto result = hps::sweep(c, axis);
  const fs::path dir(c.output_dir);
  hps::write_sweep_csv(dir / ("sweep_" + axis + ".csv"), result, axis, c);
  hps::write_timings_csv(dir / ("timings_" + axis + ".csv"), result.rows, c);
  if (axis == "extrapolation-level") hps::write_extrapolation_csv(dir / "extrapolation.csv", result, c);
  for (const auto& r : result.rows)
    std::cout << r.n1 << "x" << r.n2 << " p=" << r.p << " dt=" << r.dt << " error=" << r.final_error << "\n";
  if (result.fit) {
    std::cout << "fitted rate " << result.fit->rate << "\n";
  } else {
    std::cout << "fitted rate: absent (too few usable points)\n";
  }
  return 0;
}

int cmd_verify() {
  bool ok = true;
  auto report = [&](const std::vector<hps::CheckResult>& checks) {
    for (const auto& c : checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
      ok = ok && c.pass;
    }
  };
  report(hps::oracle_equivalence_checks());
  report(hps::tableau_checks());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HPS spectral collocation with additive Runge-Kutta time stepping"};
  app.require_subcommand(1);

  std::string config_path, output_dir, axis;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--set", overrides, "Override a config field, e.g. --set mesh.p=12");
  run->add_option("--output-dir", output_dir, "Output directory (overrides the config)");

  auto* sw = app.add_subcommand("sweep", "Convergence sweep over one axis");
  sw->add_option("config", config_path, "JSON config file")->required();
  sw->add_option("--axis", axis, "leaf-size, dt or extrapolation-level")
      ->required()
      ->check(CLI::IsMember({"leaf-size", "dt", "extrapolation-level"}));
  sw->add_option("--set", overrides, "Override a config field");
  sw->add_option("--output-dir", output_dir, "Output directory (overrides the config)");

  app.add_subcommand("verify", "Oracle-equivalence and tableau checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(load_config(config_path, overrides, output_dir));
    if (*sw) return cmd_sweep(load_config(config_path, overrides, output_dir), axis);
    return cmd_verify();
  } catch (const hps::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
