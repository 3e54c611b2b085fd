#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hps/analysis.hpp"
#include "hps/mesh.hpp"
#include "hps/problems.hpp"
#include "hps/timestep.hpp"

namespace hps {

/// Version stamp written to every manifest.
const char* version_string();

struct MeshConfig {
  int n1 = 8;
  int n2 = 8;
  int p = 8;
  bool operator==(const MeshConfig&) const = default;
};

struct ReferenceConfig {
  MeshConfig mesh;
  double dt = 0.0;  // 0: same as the run
  int q = 0;        // 0: same as the run
  bool operator==(const ReferenceConfig&) const = default;
};

struct SweepConfig {
  std::vector<int> leaf_counts;  // leaf-size axis: leaves per direction
  int dt_halvings = 5;           // dt axis: dt, dt/2, ..., dt/2^halvings
  int levels = 4;                // extrapolation axis: base_steps * 2^n, n = 0..levels
  int base_steps = 5;
  bool operator==(const SweepConfig&) const = default;
};

/// Declarative description of one run or sweep.
struct RunConfig {
  std::string experiment = "heat1d-bc";
  Formulation formulation = Formulation::Slopes;
  int q = 3;
  MeshConfig mesh;
  /// "fixed" uses dt; "leaf-power" uses dt = h^(p/q) with h the leaf width.
  std::string dt_rule = "fixed";
  double dt = 0.01;
  std::optional<double> final_time;  // default: the problem's
  std::optional<double> epsilon;     // Burgers viscosity override
  ExplicitStage explicit_stage = ExplicitStage::Continuity;
  bool slope_correction = true;
  std::string output_dir = "out";
  int threads = 1;
  bool snapshots = true;
  std::optional<ReferenceConfig> reference;
  SweepConfig sweep;

  bool operator==(const RunConfig&) const = default;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Apply "a.b.c=value" overrides; value is parsed as JSON when possible and
/// as a string otherwise.
nlohmann::json apply_overrides(nlohmann::json config, const std::vector<std::string>& overrides);

/// Outcome of one run. Timing fields are kept out of results.csv so that
/// identical configs give identical result files.
struct ResultRow {
  std::string experiment;
  int q = 0;
  std::string formulation;
  int n1 = 0, n2 = 0, p = 0;
  double dt = 0.0;
  int steps = 0;
  double single_step_error = std::numeric_limits<double>::quiet_NaN();
  double final_error = std::numeric_limits<double>::quiet_NaN();
  double max_norm = 0.0;       // final max-norm
  double peak_norm = 0.0;      // max over steps
  double initial_norm = 0.0;
  double build_seconds = 0.0;
  double step_seconds = 0.0;
};

/// Final state and bookkeeping of one simulation.
template <class Scalar>
struct Simulation {
  Mesh mesh;
  State<Scalar> final;
  ResultRow row;
};

/// Problem definition for a config (real-valued experiments).
ProblemSpec<double> real_problem(const RunConfig& config);
/// Problem definition for a config (complex-valued experiments).
ProblemSpec<Complex> complex_problem(const RunConfig& config);
bool is_complex_experiment(const std::string& name);

/// dt and step count honoring the dt rule and the final time.
std::pair<double, int> resolve_steps(const RunConfig& config, double h, double final_time);

/// Run one config to its final time. Errors are computed against the exact
/// solution when the problem has one, against config.reference otherwise.
/// A precomputed reference run may be passed in to avoid recomputing it.
template <class Scalar>
Simulation<Scalar> simulate(const ProblemSpec<Scalar>& spec, const RunConfig& config,
                            const Simulation<Scalar>* reference = nullptr);

/// The run described by config.reference (same problem and final time).
template <class Scalar>
Simulation<Scalar> simulate_reference(const ProblemSpec<Scalar>& spec, const RunConfig& config);

ResultRow run(const RunConfig& config);

struct SweepResult {
  std::vector<ResultRow> rows;
  std::optional<ConvergenceSeries> fit;
  std::vector<std::vector<double>> extrapolation;  // errors[n][k] for the extrapolation axis
};

/// axis in {"leaf-size", "dt", "extrapolation-level"}.
SweepResult sweep(const RunConfig& config, const std::string& axis);

/// Writers. Each CSV gets a sibling <name>.manifest.json with the full config
/// and the version stamp.
void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows,
                       const RunConfig& config);
void write_timings_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows,
                       const RunConfig& config);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result, const std::string& axis,
                     const RunConfig& config);
void write_extrapolation_csv(const std::filesystem::path& path, const SweepResult& result,
                             const RunConfig& config);

/// Text snapshot: '#' header lines (dim, p, leaves, domain, time,
/// components), then one line per node "x y u0 u1 ..." for real fields and
/// "x y re0 im0 re1 im1 ..." for complex ones.
template <class Scalar>
void write_snapshot(const std::filesystem::path& path, const Mesh& mesh, const State<Scalar>& u, double t);

}  // namespace hps
