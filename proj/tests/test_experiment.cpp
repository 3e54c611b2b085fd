#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hps/error.hpp"
#include "hps/analysis.hpp"
#include "hps/experiment.hpp"

using namespace hps;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("experiment: config round trip") {
  RunConfig c;
  c.experiment = "schrodinger-asymmetric";
  c.formulation = Formulation::Stages;
  c.q = 4;
  c.mesh = {4, 4, 8};
  c.dt_rule = "leaf-power";
  c.final_time = 1.5;
  c.epsilon = 0.01;
  c.explicit_stage = ExplicitStage::Tridiagonal;
  c.slope_correction = false;
  c.reference = ReferenceConfig{{8, 8, 10}, 0.01, 5};
  c.sweep.leaf_counts = {2, 4};
  c.sweep.dt_halvings = 3;
  CHECK(RunConfig::from_json(c.to_json()) == c);
  CHECK(RunConfig::from_json(json::parse(c.to_json().dump())) == c);

  const RunConfig defaults;
  CHECK(RunConfig::from_json(json::object()) == defaults);
  CHECK(RunConfig::from_json(defaults.to_json()) == defaults);
}

TEST_CASE("experiment: config errors name the field") {
  auto message = [](const json& j) {
    try {
      RunConfig::from_json(j);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{"q", 6}}).find("'q'") != std::string::npos);
  CHECK(message({{"mesh", {{"p", 1}}}}).find("mesh.p") != std::string::npos);
  CHECK(message({{"experiment", "wave"}}).find("'experiment'") != std::string::npos);
  CHECK(message({{"dt_rule", "cfl"}}).find("'dt_rule'") != std::string::npos);
  CHECK(message({{"bogus", 1}}).find("bogus") != std::string::npos);
  CHECK(message({{"sweep", {{"levels", -1}}}}).find("sweep.levels") != std::string::npos);
  CHECK(message({{"experiment", "burgers-rotating"}, {"explicit_stage", "averaged"}}).find("explicit_stage") !=
        std::string::npos);
  CHECK(message({{"q", "three"}}).find("'q'") != std::string::npos);
}

TEST_CASE("experiment: overrides") {
  const json base = RunConfig{}.to_json();
  const json j = apply_overrides(base, {"mesh.p=12", "formulation=stages", "sweep.leaf_counts=[2,4]", "dt=0.5"});
  const auto c = RunConfig::from_json(j);
  CHECK(c.mesh.p == 12);
  CHECK(c.formulation == Formulation::Stages);
  CHECK(c.sweep.leaf_counts == std::vector<int>{2, 4});
  CHECK(c.dt == 0.5);
  CHECK_THROWS_AS(apply_overrides(base, {"novalue"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(base, {"mesh..p=3"}), ConfigError);
}

TEST_CASE("experiment: step resolution") {
  RunConfig c;
  c.dt = 0.3;
  auto [dt, steps] = resolve_steps(c, 0.1, 1.0);
  CHECK(steps == 4);
  CHECK(dt == doctest::Approx(0.25));
  c.dt = 0.25;
  std::tie(dt, steps) = resolve_steps(c, 0.1, 1.0);
  CHECK(steps == 4);
  c.dt_rule = "leaf-power";
  c.mesh.p = 6;
  c.q = 3;
  std::tie(dt, steps) = resolve_steps(c, 0.5, 1.0);  // 0.5^2
  CHECK(steps == 4);
}

TEST_CASE("experiment: identical configs give identical artifacts") {
  RunConfig c;
  c.experiment = "heat1d-bc";
  c.mesh = {4, 1, 10};
  c.dt = 0.125;
  c.final_time = 0.5;
  const auto dir = std::filesystem::temp_directory_path() / "hps_test_experiment";
  std::filesystem::remove_all(dir);
  const auto a = run(c), b = run(c);
  write_results_csv(dir / "a.csv", {a}, c);
  write_results_csv(dir / "b.csv", {b}, c);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(a.final_error < 1e-6);
  const json ma = json::parse(slurp(dir / "a.manifest.json"));
  const json mb = json::parse(slurp(dir / "b.manifest.json"));
  CHECK(ma.at("config") == mb.at("config"));
  CHECK(ma.at("version") == version_string());
  CHECK(RunConfig::from_json(ma.at("config")) == c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment: cross-stream Burgers self-convergence in dt") {
  RunConfig c;
  c.experiment = "burgers-cross";
  c.q = 5;
  c.mesh = {8, 8, 12};
  c.epsilon = 0.1;
  c.final_time = 0.1;
  c.snapshots = false;
  const auto spec = real_problem(c);
  std::vector<State<double>> u;
  for (double dt : {0.01, 0.005, 0.0025}) {
    c.dt = dt;
    u.push_back(simulate(spec, c).final);
  }
  const double d1 = max_error(u[0], u[1]), d2 = max_error(u[1], u[2]);
  MESSAGE("differences " << d1 << " " << d2);
  CHECK(std::log2(d1 / d2) >= 3.0);
}

TEST_CASE("experiment: blow-up is reported, not written") {
  RunConfig c;
  c.experiment = "burgers-cross";
  c.mesh = {4, 4, 10};
  c.dt = 0.005;
  c.final_time = 0.3;
  CHECK_THROWS_AS(run(c), NonFiniteState);
}
