#include "hps/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <type_traits>

#include "hps/error.hpp"

namespace hps {

using nlohmann::json;

namespace {

const std::set<std::string> kExperiments{"heat1d-bc",         "heat1d-kink",      "schrodinger-harmonic",
                                         "schrodinger-asymmetric", "burgers-rotating", "burgers-cross"};

std::string to_string(Formulation f) { return f == Formulation::Slopes ? "slopes" : "stages"; }

std::string to_string(ExplicitStage e) {
  switch (e) {
    case ExplicitStage::Continuity:
      return "continuity";
    case ExplicitStage::Tridiagonal:
      return "tridiagonal";
    case ExplicitStage::Averaged:
      return "averaged";
  }
  return "continuity";
}

Formulation parse_formulation(const std::string& s) {
  if (s == "slopes") return Formulation::Slopes;
  if (s == "stages") return Formulation::Stages;
  throw ConfigError("config field 'formulation': expected \"slopes\" or \"stages\", got \"" + s + "\"");
}

ExplicitStage parse_explicit_stage(const std::string& s) {
  if (s == "continuity") return ExplicitStage::Continuity;
  if (s == "tridiagonal") return ExplicitStage::Tridiagonal;
  if (s == "averaged") return ExplicitStage::Averaged;
  throw ConfigError("config field 'explicit_stage': expected continuity, tridiagonal or averaged, got \"" + s + "\"");
}

template <class T>
T field(const json& j, const char* key, const std::string& path, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + path + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigError("config field '" + path + "': expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("config field '" + path + k + "': unknown key");
}

MeshConfig mesh_from_json(const json& j, const std::string& path) {
  reject_unknown(j, {"n1", "n2", "p"}, path);
  MeshConfig m;
  m.n1 = field(j, "n1", path, m.n1);
  m.n2 = field(j, "n2", path, m.n2);
  m.p = field(j, "p", path, m.p);
  return m;
}

json mesh_to_json(const MeshConfig& m) { return {{"n1", m.n1}, {"n2", m.n2}, {"p", m.p}}; }

void validate_mesh(const MeshConfig& m, const std::string& path) {
  if (m.n1 < 1) throw ConfigError("config field '" + path + "n1': must be >= 1");
  if (m.n2 < 1) throw ConfigError("config field '" + path + "n2': must be >= 1");
  if (m.p < 3) throw ConfigError("config field '" + path + "p': must be >= 3");
}

bool is_1d(const std::string& name) { return name == "heat1d-bc" || name == "heat1d-kink"; }

double norm(const RealField& f) { return f.size() ? f.cwiseAbs().maxCoeff<Eigen::PropagateNaN>() : 0.0; }
double norm(const ComplexField& f) { return f.size() ? f.cwiseAbs().maxCoeff<Eigen::PropagateNaN>() : 0.0; }
template <class Scalar>
double norm(const State<Scalar>& s) {
  double m = 0.0;
  for (const auto& f : s) {
    const double v = norm(f);
    if (!(v <= m)) m = v;  // keeps NaN
  }
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

void write_manifest(const std::filesystem::path& csv, const RunConfig& config, const json& extra = json::object()) {
  json m;
  m["version"] = version_string();
  m["config"] = config.to_json();
  m["file"] = csv.filename().string();
  for (const auto& [k, v] : extra.items()) m[k] = v;
  std::filesystem::path path = csv;
  path.replace_extension(".manifest.json");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << m.dump(2) << "\n";
}

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

const char* kResultHeader = "experiment,q,formulation,n1,n2,p,dt,steps,single_step_error,final_error,max_norm,peak_norm";

std::string result_fields(const ResultRow& r) {
  return r.experiment + "," + std::to_string(r.q) + "," + r.formulation + "," + std::to_string(r.n1) + "," +
         std::to_string(r.n2) + "," + std::to_string(r.p) + "," + fmt(r.dt) + "," + std::to_string(r.steps) + "," +
         fmt(r.single_step_error) + "," + fmt(r.final_error) + "," + fmt(r.max_norm) + "," + fmt(r.peak_norm);
}

template <class Scalar>
ProblemSpec<Scalar> problem_for(const RunConfig& config) {
  if constexpr (is_complex_v<Scalar>) {
    return complex_problem(config);
  } else {
    return real_problem(config);
  }
}

}  // namespace

const char* version_string() { return "hps-artifact 1.0.0"; }

void RunConfig::validate() const {
  if (!kExperiments.count(experiment)) throw ConfigError("config field 'experiment': unknown experiment \"" + experiment + "\"");
  if (q < 3 || q > 5) throw ConfigError("config field 'q': must be 3, 4 or 5");
  validate_mesh(mesh, "mesh.");
  if (dt_rule != "fixed" && dt_rule != "leaf-power")
    throw ConfigError("config field 'dt_rule': expected \"fixed\" or \"leaf-power\"");
  if (dt_rule == "fixed" && !(dt > 0.0)) throw ConfigError("config field 'dt': must be positive");
  if (final_time && !(*final_time > 0.0)) throw ConfigError("config field 'final_time': must be positive");
  if (epsilon && !(*epsilon > 0.0)) throw ConfigError("config field 'epsilon': must be positive");
  if (threads < 1) throw ConfigError("config field 'threads': must be >= 1");
  if (explicit_stage == ExplicitStage::Averaged && !is_1d(experiment))
    throw ConfigError("config field 'explicit_stage': averaged is only available for 1D experiments");
  if (reference) {
    validate_mesh(reference->mesh, "reference.mesh.");
    if (reference->dt < 0.0) throw ConfigError("config field 'reference.dt': must be >= 0");
    if (reference->q != 0 && (reference->q < 3 || reference->q > 5))
      throw ConfigError("config field 'reference.q': must be 0, 3, 4 or 5");
  }
  for (int n : sweep.leaf_counts)
    if (n < 1) throw ConfigError("config field 'sweep.leaf_counts': entries must be >= 1");
  if (sweep.dt_halvings < 0) throw ConfigError("config field 'sweep.dt_halvings': must be >= 0");
  if (sweep.levels < 0) throw ConfigError("config field 'sweep.levels': must be >= 0");
  if (sweep.base_steps < 1) throw ConfigError("config field 'sweep.base_steps': must be >= 1");
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j, {"experiment", "formulation", "q", "mesh", "dt_rule", "dt", "final_time", "epsilon",
                     "explicit_stage", "slope_correction", "output_dir", "threads", "snapshots", "reference", "sweep"},
                 "");
  RunConfig c;
  c.experiment = field(j, "experiment", "", c.experiment);
  c.formulation = parse_formulation(field(j, "formulation", "", to_string(c.formulation)));
  c.q = field(j, "q", "", c.q);
  if (j.contains("mesh")) c.mesh = mesh_from_json(j.at("mesh"), "mesh.");
  c.dt_rule = field(j, "dt_rule", "", c.dt_rule);
  c.dt = field(j, "dt", "", c.dt);
  if (j.contains("final_time") && !j.at("final_time").is_null()) c.final_time = field(j, "final_time", "", 0.0);
  if (j.contains("epsilon") && !j.at("epsilon").is_null()) c.epsilon = field(j, "epsilon", "", 0.0);
  c.explicit_stage = parse_explicit_stage(field(j, "explicit_stage", "", to_string(c.explicit_stage)));
  c.slope_correction = field(j, "slope_correction", "", c.slope_correction);
  c.output_dir = field(j, "output_dir", "", c.output_dir);
  c.threads = field(j, "threads", "", c.threads);
  c.snapshots = field(j, "snapshots", "", c.snapshots);
  if (j.contains("reference") && !j.at("reference").is_null()) {
    const json& r = j.at("reference");
    reject_unknown(r, {"mesh", "dt", "q"}, "reference.");
    ReferenceConfig ref;
    if (r.contains("mesh")) ref.mesh = mesh_from_json(r.at("mesh"), "reference.mesh.");
    ref.dt = field(r, "dt", "reference.", ref.dt);
    ref.q = field(r, "q", "reference.", ref.q);
    c.reference = ref;
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, {"leaf_counts", "dt_halvings", "levels", "base_steps"}, "sweep.");
    c.sweep.leaf_counts = field(s, "leaf_counts", "sweep.", c.sweep.leaf_counts);
    c.sweep.dt_halvings = field(s, "dt_halvings", "sweep.", c.sweep.dt_halvings);
    c.sweep.levels = field(s, "levels", "sweep.", c.sweep.levels);
    c.sweep.base_steps = field(s, "base_steps", "sweep.", c.sweep.base_steps);
  }
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["formulation"] = to_string(formulation);
  j["q"] = q;
  j["mesh"] = mesh_to_json(mesh);
  j["dt_rule"] = dt_rule;
  j["dt"] = dt;
  j["final_time"] = final_time ? json(*final_time) : json(nullptr);
  j["epsilon"] = epsilon ? json(*epsilon) : json(nullptr);
  j["explicit_stage"] = to_string(explicit_stage);
  j["slope_correction"] = slope_correction;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  j["snapshots"] = snapshots;
  if (reference) {
    j["reference"] = {{"mesh", mesh_to_json(reference->mesh)}, {"dt", reference->dt}, {"q", reference->q}};
  } else {
    j["reference"] = nullptr;
  }
  j["sweep"] = {{"leaf_counts", sweep.leaf_counts},
                {"dt_halvings", sweep.dt_halvings},
                {"levels", sweep.levels},
                {"base_steps", sweep.base_steps}};
  return j;
}

json apply_overrides(json config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override \"" + o + "\": expected key=value");
    const std::string key = o.substr(0, eq), text = o.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json* node = &config;
    size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (part.empty()) throw ConfigError("override \"" + o + "\": empty key component");
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
      node = &(*node)[part];
      start = dot + 1;
    }
  }
  return config;
}

bool is_complex_experiment(const std::string& name) { return name.rfind("schrodinger", 0) == 0; }

ProblemSpec<double> real_problem(const RunConfig& c) {
  if (c.experiment == "heat1d-bc") return heat_1d_cos();
  if (c.experiment == "heat1d-kink") return heat_1d_kink();
  if (c.experiment == "burgers-rotating") return burgers_rotating(c.epsilon.value_or(0.005));
  if (c.experiment == "burgers-cross") return burgers_cross_stream(c.epsilon.value_or(0.025));
  throw ConfigError("config field 'experiment': \"" + c.experiment + "\" is not a real-valued experiment");
}

ProblemSpec<Complex> complex_problem(const RunConfig& c) {
  if (c.experiment == "schrodinger-harmonic") return schrodinger_harmonic();
  if (c.experiment == "schrodinger-asymmetric") return schrodinger_asymmetric();
  throw ConfigError("config field 'experiment': \"" + c.experiment + "\" is not a complex-valued experiment");
}

std::pair<double, int> resolve_steps(const RunConfig& config, double h, double final_time) {
  double dt = config.dt;
  if (config.dt_rule == "leaf-power") dt = std::pow(h, static_cast<double>(config.mesh.p) / config.q);
  const int steps = std::max(1, static_cast<int>(std::ceil(final_time / dt - 1e-9)));
  return {final_time / steps, steps};
}

template <class Scalar>
Simulation<Scalar> simulate_reference(const ProblemSpec<Scalar>& spec, const RunConfig& config) {
  if (!config.reference) throw ConfigError("config field 'reference': missing");
  RunConfig rc = config;
  rc.mesh = config.reference->mesh;
  if (config.reference->dt > 0.0) {
    rc.dt_rule = "fixed";
    rc.dt = config.reference->dt;
  }
  rc.q = config.reference->q > 0 ? config.reference->q : config.q;
  rc.reference.reset();
  return simulate(spec, rc);
}

template <class Scalar>
Simulation<Scalar> simulate(const ProblemSpec<Scalar>& spec, const RunConfig& config,
                            const Simulation<Scalar>* reference) {
  config.validate();
  Simulation<Scalar> sim{make_mesh(spec, config.mesh.n1, config.mesh.n2, config.mesh.p), {}, {}};
  const Mesh& mesh = sim.mesh;
  const double T = config.final_time.value_or(spec.final_time);
  const auto [dt, steps] = resolve_steps(config, mesh.hx(), T);
  ResultRow& row = sim.row;
  row.experiment = config.experiment;
  row.q = config.q;
  row.formulation = to_string(config.formulation);
  row.n1 = mesh.n1();
  row.n2 = mesh.n2();
  row.p = mesh.order();
  row.dt = dt;
  row.steps = steps;

  StepOptions opt;
  opt.formulation = config.formulation;
  opt.explicit_stage = config.explicit_stage;
  opt.slope_correction = config.slope_correction;
  opt.threads = config.threads;
  const auto t0 = std::chrono::steady_clock::now();
  const Integrator<Scalar> integ(make_system(spec, mesh), load_tableau(config.q), dt, opt);
  row.build_seconds = seconds_since(t0);

  State<Scalar> u = sample(mesh, spec.initial, 0.0, spec.components);
  row.initial_norm = norm(u);
  if (spec.exact) row.single_step_error = max_error(integ.step(u, 0.0), sample(mesh, spec.exact, dt, spec.components));

  const auto t1 = std::chrono::steady_clock::now();
  row.peak_norm = row.initial_norm;
  for (int n = 0; n < steps; ++n) {
    u = integ.step(u, n * dt);
    const double un = norm(u);
    if (!std::isfinite(un))
      throw NonFiniteState(config.experiment + ": solution is not finite after step " + std::to_string(n + 1) +
                           " (t = " + fmt(dt * (n + 1)) + ")");
    row.peak_norm = std::max(row.peak_norm, un);
  }
  row.step_seconds = seconds_since(t1);
  row.max_norm = norm(u);

  if (spec.exact) {
    row.final_error = max_error(u, sample(mesh, spec.exact, T, spec.components));
  } else if (config.reference || reference) {
    const auto ref = reference ? Simulation<Scalar>{} : simulate_reference(spec, config);
    const Simulation<Scalar>& r = reference ? *reference : ref;
    State<Scalar> on_mesh(spec.components);
    for (int c = 0; c < spec.components; ++c) on_mesh[c] = interpolate(r.mesh, r.final[c], mesh);
    row.final_error = max_error(u, on_mesh);
  } else if (config.experiment == "heat1d-kink") {
    row.final_error = row.max_norm;  // distance to the zero steady state
  }
  sim.final = std::move(u);
  return sim;
}

ResultRow run(const RunConfig& config) {
  if (is_complex_experiment(config.experiment)) return simulate(complex_problem(config), config).row;
  return simulate(real_problem(config), config).row;
}

namespace {

template <class Scalar>
SweepResult sweep_impl(const RunConfig& config, const std::string& axis) {
  const auto spec = problem_for<Scalar>(config);
  SweepResult result;
  std::vector<double> resolution, errors;
  std::optional<Simulation<Scalar>> ref;
  if (!spec.exact && config.reference && axis != "extrapolation-level") ref = simulate_reference(spec, config);
  const Simulation<Scalar>* ref_ptr = ref ? &*ref : nullptr;
  if (axis == "leaf-size") {
    if (config.sweep.leaf_counts.empty()) throw ConfigError("config field 'sweep.leaf_counts': empty for leaf-size axis");
    for (int n : config.sweep.leaf_counts) {
      RunConfig c = config;
      c.mesh.n1 = n;
      c.mesh.n2 = spec.dim == 1 ? 1 : n;
      const auto sim = simulate(spec, c, ref_ptr);
      result.rows.push_back(sim.row);
      resolution.push_back(sim.mesh.hx());
      errors.push_back(sim.row.final_error);
    }
  } else if (axis == "dt") {
    std::vector<State<Scalar>> finals;
    for (int k = 0; k <= config.sweep.dt_halvings; ++k) {
      RunConfig c = config;
      c.dt_rule = "fixed";
      c.dt = config.dt / std::ldexp(1.0, k);
      auto sim = simulate(spec, c, ref_ptr);
      result.rows.push_back(sim.row);
      finals.push_back(std::move(sim.final));
    }
    // self-convergence against the finest run when nothing better exists
    if (!spec.exact && !config.reference) {
      for (size_t k = 0; k + 1 < finals.size(); ++k) result.rows[k].final_error = max_error(finals[k], finals.back());
      result.rows.back().final_error = std::numeric_limits<double>::quiet_NaN();
    }
    for (const auto& r : result.rows) {
      resolution.push_back(r.dt);
      errors.push_back(r.final_error);
    }
  } else if (axis == "extrapolation-level") {
    const double T = config.final_time.value_or(spec.final_time);
    std::vector<State<Scalar>> finals;
    for (int n = 0; n <= config.sweep.levels; ++n) {
      RunConfig c = config;
      c.dt_rule = "fixed";
      c.dt = T / (config.sweep.base_steps * std::ldexp(1.0, n));
      c.reference.reset();
      auto sim = simulate(spec, c);
      result.rows.push_back(sim.row);
      finals.push_back(std::move(sim.final));
    }
    State<Scalar> reference;
    const Mesh mesh = make_mesh(spec, config.mesh.n1, config.mesh.n2, config.mesh.p);
    if (spec.exact) {
      reference = sample(mesh, spec.exact, T, spec.components);
    } else if (config.reference) {
      RunConfig rc = config;
      if (!(config.reference->dt > 0.0)) {
        rc.reference->dt = T / (config.sweep.base_steps * std::ldexp(1.0, config.sweep.levels + 2));
      }
      const auto r = simulate_reference(spec, rc);
      for (int c = 0; c < spec.components; ++c) reference.push_back(interpolate(r.mesh, r.final[c], mesh));
    } else {
      throw ConfigError("extrapolation-level axis needs an exact solution or a 'reference' config");
    }
    result.extrapolation = richardson(finals, config.q).errors(reference);
    for (size_t n = 0; n < result.rows.size(); ++n) {
      result.rows[n].final_error = result.extrapolation[n][0];
      resolution.push_back(result.rows[n].dt);
      errors.push_back(result.rows[n].final_error);
    }
  } else {
    throw ConfigError("sweep axis \"" + axis + "\": expected leaf-size, dt or extrapolation-level");
  }
  std::vector<double> rx, ry;
  for (size_t i = 0; i < errors.size(); ++i)
    if (std::isfinite(errors[i])) {
      rx.push_back(resolution[i]);
      ry.push_back(errors[i]);
    }
  try {
    result.fit = fit_rate(rx, ry);
  } catch (const InsufficientData&) {
    result.fit.reset();
  }
  return result;
}

}  // namespace

SweepResult sweep(const RunConfig& config, const std::string& axis) {
  config.validate();
  if (is_complex_experiment(config.experiment)) return sweep_impl<Complex>(config, axis);
  return sweep_impl<double>(config, axis);
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows, const RunConfig& config) {
  auto out = open_csv(path);
  out << kResultHeader << "\n";
  for (const auto& r : rows) out << result_fields(r) << "\n";
  write_manifest(path, config);
}

void write_timings_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows, const RunConfig& config) {
  auto out = open_csv(path);
  out << "experiment,q,formulation,n1,n2,p,dt,steps,build_seconds,step_seconds\n";
  for (const auto& r : rows)
    out << r.experiment << "," << r.q << "," << r.formulation << "," << r.n1 << "," << r.n2 << "," << r.p << ","
        << fmt(r.dt) << "," << r.steps << "," << fmt(r.build_seconds) << "," << fmt(r.step_seconds) << "\n";
  write_manifest(path, config);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result, const std::string& axis,
                     const RunConfig& config) {
  auto out = open_csv(path);
  out << "kind," << kResultHeader << ",rate\n";
  double prev_res = 0, prev_err = 0;
  for (const auto& r : result.rows) {
    const double res = axis == "leaf-size" ? (r.n1 > 0 ? 1.0 / r.n1 : 0.0) : r.dt;
    double rate = std::numeric_limits<double>::quiet_NaN();
    if (prev_err > 0 && r.final_error > 0 && std::isfinite(r.final_error))
      rate = std::log(prev_err / r.final_error) / std::log(prev_res / res);
    out << "point," << result_fields(r) << "," << fmt(rate) << "\n";
    prev_res = res;
    prev_err = std::isfinite(r.final_error) ? r.final_error : 0.0;
  }
  // summary row: fitted rate, empty when fewer than three usable points
  out << "fit," << config.experiment << "," << config.q << "," << (config.formulation == Formulation::Slopes ? "slopes" : "stages")
      << ",,,,,,,,,," << (result.fit ? fmt(result.fit->rate) : "") << "\n";
  write_manifest(path, config, {{"axis", axis}});
}

void write_extrapolation_csv(const std::filesystem::path& path, const SweepResult& result, const RunConfig& config) {
  auto out = open_csv(path);
  const size_t levels = result.extrapolation.size();
  out << "n,steps,dt";
  for (size_t k = 0; k < levels; ++k) out << ",extrapolations_" << k;
  out << "\n";
  for (size_t n = 0; n < levels; ++n) {
    out << n << "," << result.rows[n].steps << "," << fmt(result.rows[n].dt);
    for (size_t k = 0; k < levels; ++k) out << "," << (k < result.extrapolation[n].size() ? fmt(result.extrapolation[n][k]) : "");
    out << "\n";
  }
  write_manifest(path, config, {{"axis", "extrapolation-level"}});
}

template <class Scalar>
void write_snapshot(const std::filesystem::path& path, const Mesh& mesh, const State<Scalar>& u, double t) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const Box& d = mesh.domain();
  out << "# dim " << mesh.dim() << "\n# p " << mesh.order() << "\n# leaves " << mesh.n1() << " " << mesh.n2()
      << "\n# domain " << fmt(d.x0) << " " << fmt(d.x1) << " " << fmt(d.y0) << " " << fmt(d.y1) << "\n# time " << fmt(t)
      << "\n# components " << u.size() << "\n# nodes " << mesh.size() << "\n# columns x y";
  constexpr bool complex = !std::is_same_v<Scalar, double>;
  for (size_t c = 0; c < u.size(); ++c) {
    if (complex) out << " re" << c << " im" << c;
    else out << " u" << c;
  }
  out << "\n";
  for (int id = 0; id < mesh.size(); ++id) {
    out << fmt(mesh.node(id).x) << " " << fmt(mesh.node(id).y);
    for (const auto& f : u) {
      out << " " << fmt(std::real(f(id)));
      if (complex) out << " " << fmt(std::imag(f(id)));
    }
    out << "\n";
  }
}

template Simulation<double> simulate(const ProblemSpec<double>&, const RunConfig&, const Simulation<double>*);
template Simulation<Complex> simulate(const ProblemSpec<Complex>&, const RunConfig&, const Simulation<Complex>*);
template Simulation<double> simulate_reference(const ProblemSpec<double>&, const RunConfig&);
template Simulation<Complex> simulate_reference(const ProblemSpec<Complex>&, const RunConfig&);
template void write_snapshot(const std::filesystem::path&, const Mesh&, const State<double>&, double);
template void write_snapshot(const std::filesystem::path&, const Mesh&, const State<Complex>&, double);

}  // namespace hps
