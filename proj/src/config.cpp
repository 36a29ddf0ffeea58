#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qpr/experiment.hpp"
#include "qpr/version.hpp"

namespace qpr::bench {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void cfg_error(const std::string& msg) {
  throw std::runtime_error("config: " + msg);
}

void check_keys(const ordered_json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) cfg_error(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      cfg_error("unknown key '" + key + "' in " + where);
  }
}

double get_num(const ordered_json& obj, const std::string& key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number()) cfg_error("'" + key + "' must be a number");
  return obj[key].get<double>();
}

std::size_t get_count(const ordered_json& obj, const std::string& key,
                      std::size_t dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer())
    cfg_error("'" + key + "' must be an integer");
  const auto v = obj[key].get<long long>();
  if (v < 0) cfg_error("'" + key + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

std::string get_str(const ordered_json& obj, const std::string& key,
                    const std::string& dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_string()) cfg_error("'" + key + "' must be a string");
  return obj[key].get<std::string>();
}

ProblemSource parse_problem(const ordered_json& obj,
                            const std::string& where) {
  check_keys(obj, where, {"file", "random_ising"});
  ProblemSource src;
  const bool has_file = obj.contains("file");
  const bool has_random = obj.contains("random_ising");
  if (has_file == has_random)
    cfg_error(where + " needs exactly one of 'file' or 'random_ising'");
  if (has_file) {
    src.file = get_str(obj, "file", "");
    if (src.file.empty()) cfg_error(where + ".file must be non-empty");
  } else {
    const auto& r = obj["random_ising"];
    check_keys(r, where + ".random_ising", {"n", "density", "seed"});
    src.random = true;
    src.random_n = get_count(r, "n", 12);
    src.random_density = get_num(r, "density", 0.5);
    src.random_seed = static_cast<std::uint64_t>(get_count(r, "seed", 1));
    if (src.random_n < 1) cfg_error("random_ising.n must be >= 1");
  }
  return src;
}

SolverSpec parse_solver(const ordered_json& obj) {
  check_keys(obj, "solvers[]",
             {"id", "t_start", "t_end", "cooling_ratio", "sweeps_per_stage",
              "a0", "c0", "dt", "steps", "restarts", "trace_interval",
              "subset_size", "rounds", "inner", "depth", "shots", "workers"});
  SolverSpec spec;
  spec.id = get_str(obj, "id", "");
  if (!known_solver_id(spec.id))
    cfg_error("unknown solver id '" + spec.id + "'");

  if (obj.contains("t_start") || obj.contains("t_end")) {
    spec.sa.auto_scale = false;
    spec.sa.t_start = get_num(obj, "t_start", 0.0);
    spec.sa.t_end = get_num(obj, "t_end", 1e-3 * spec.sa.t_start);
  }
  spec.sa.cooling_ratio = get_num(obj, "cooling_ratio", spec.sa.cooling_ratio);
  spec.sa.sweeps_per_stage =
      get_count(obj, "sweeps_per_stage", spec.sa.sweeps_per_stage);

  spec.sb.a0 = get_num(obj, "a0", spec.sb.a0);
  spec.sb.c0 = get_num(obj, "c0", spec.sb.c0);
  spec.sb.dt = get_num(obj, "dt", spec.sb.dt);
  spec.sb.steps = get_count(obj, "steps", spec.sb.steps);
  spec.sb.restarts = get_count(obj, "restarts", spec.sb.restarts);
  spec.sb.trace_interval =
      get_count(obj, "trace_interval", spec.sb.trace_interval);

  spec.subqubo_subset = get_count(obj, "subset_size", spec.subqubo_subset);
  spec.subqubo_rounds = get_count(obj, "rounds", spec.subqubo_rounds);
  spec.subqubo_inner = get_str(obj, "inner", spec.subqubo_inner);

  spec.qaoa_depth = get_count(obj, "depth", spec.qaoa_depth);
  if (obj.contains("restarts")) spec.qaoa_restarts = spec.sb.restarts;
  spec.qaoa_shots = get_count(obj, "shots", spec.qaoa_shots);

  spec.brute_workers =
      static_cast<unsigned>(get_count(obj, "workers", spec.brute_workers));
  spec.validate();
  return spec;
}

}  // namespace

std::string ProblemSource::label() const {
  if (!file.empty()) return file;
  std::ostringstream os;
  os << "random_ising(n=" << random_n << ",density=" << random_density
     << ",seed=" << random_seed << ")";
  return os.str();
}

void ExperimentConfig::validate() const {
  if (schema_version != qpr::kSchemaVersion)
    cfg_error("unsupported schema_version");
  if (task != "solve" && task != "track" && task != "jets" &&
      task != "vertex" && task != "bench")
    cfg_error("unknown task '" + task + "'");
  if (seeds.empty()) cfg_error("seeds must be a non-empty list");
  if (solvers.empty()) cfg_error("solvers must be a non-empty list");
  if (jobs < 1) cfg_error("jobs must be >= 1");
}

ExperimentConfig parse_config_json(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    cfg_error(std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"schema_version", "task", "seeds", "output", "jobs", "solvers",
              "solve", "track", "jets", "vertex", "bench"});

  ExperimentConfig cfg;
  if (!root.contains("schema_version"))
    cfg_error("missing 'schema_version'");
  cfg.schema_version = static_cast<int>(get_count(root, "schema_version", 1));
  cfg.task = get_str(root, "task", "");
  cfg.output = get_str(root, "output", "");
  cfg.jobs = static_cast<unsigned>(get_count(root, "jobs", 1));

  if (!root.contains("seeds") || !root["seeds"].is_array())
    cfg_error("'seeds' must be an array");
  for (const auto& s : root["seeds"]) {
    if (!s.is_number_integer() && !s.is_number_unsigned())
      cfg_error("seeds must be integers");
    cfg.seeds.push_back(s.get<std::uint64_t>());
  }

  if (!root.contains("solvers") || !root["solvers"].is_array())
    cfg_error("'solvers' must be an array");
  for (const auto& s : root["solvers"]) {
    cfg.solvers.push_back(parse_solver(s));
    cfg.solver_json.push_back(s.dump());
  }

  const std::string section = cfg.task;
  for (const char* name : {"solve", "track", "jets", "vertex", "bench"})
    if (root.contains(name) && name != section)
      cfg_error(std::string("section '") + name + "' does not match task '" +
                section + "'");

  if (cfg.task == "solve") {
    if (!root.contains("solve")) cfg_error("missing 'solve' section");
    const auto& s = root["solve"];
    check_keys(s, "solve", {"problem", "trace_output"});
    if (!s.contains("problem")) cfg_error("solve.problem is required");
    cfg.solve.problem = parse_problem(s["problem"], "solve.problem");
    cfg.solve.trace_output = get_str(s, "trace_output", "");
  } else if (cfg.task == "track") {
    if (!root.contains("track")) cfg_error("missing 'track' section");
    const auto& t = root["track"];
    check_keys(t, "track",
               {"events", "particles", "layers", "r_min", "r_max",
                "z_half_length", "hit_sigma", "b_field", "segment",
                "max_dphi", "dz_dr_window", "adjacent_layers_only",
                "max_curvature", "max_dtheta", "sigma_kappa", "sigma_theta",
                "w_d", "w_z", "conflict_value", "event_seed", "hits_file"});
    auto& task = cfg.track_task;
    task.events = get_count(t, "events", task.events);
    task.particles = get_count(t, "particles", task.particles);
    task.detector = track::DetectorModel::barrel(
        get_count(t, "layers", 10), get_num(t, "r_min", 30.0),
        get_num(t, "r_max", 300.0));
    task.detector.z_half_length =
        get_num(t, "z_half_length", task.detector.z_half_length);
    task.detector.hit_sigma = get_num(t, "hit_sigma", task.detector.hit_sigma);
    task.detector.b_field = get_num(t, "b_field", task.detector.b_field);
    task.segment = get_str(t, "segment", task.segment);
    if (task.segment != "triplet" && task.segment != "doublet")
      cfg_error("track.segment must be 'triplet' or 'doublet'");
    task.cuts.max_dphi = get_num(t, "max_dphi", task.cuts.max_dphi);
    task.cuts.dz_dr_window =
        get_num(t, "dz_dr_window", task.cuts.dz_dr_window);
    if (t.contains("adjacent_layers_only")) {
      if (!t["adjacent_layers_only"].is_boolean())
        cfg_error("adjacent_layers_only must be a boolean");
      task.cuts.adjacent_layers_only = t["adjacent_layers_only"].get<bool>();
    }
    task.triplet_cuts.max_curvature =
        get_num(t, "max_curvature", task.triplet_cuts.max_curvature);
    task.triplet_cuts.max_dtheta =
        get_num(t, "max_dtheta", task.triplet_cuts.max_dtheta);
    task.triplet_qubo.sigma_kappa =
        get_num(t, "sigma_kappa", task.triplet_qubo.sigma_kappa);
    task.triplet_qubo.sigma_theta =
        get_num(t, "sigma_theta", task.triplet_qubo.sigma_theta);
    task.triplet_qubo.w_d = get_num(t, "w_d", task.triplet_qubo.w_d);
    task.triplet_qubo.w_z = get_num(t, "w_z", task.triplet_qubo.w_z);
    task.triplet_qubo.conflict_value =
        get_num(t, "conflict_value", task.triplet_qubo.conflict_value);
    task.event_seed =
        static_cast<std::uint64_t>(get_count(t, "event_seed", 1));
    task.hits_file = get_str(t, "hits_file", "");
  } else if (cfg.task == "jets") {
    if (!root.contains("jets")) cfg_error("missing 'jets' section");
    const auto& j = root["jets"];
    check_keys(j, "jets",
               {"events", "n_jet", "sqrt_s", "spread", "constituents_per_jet",
                "formulation", "event_seed", "constituents_file"});
    auto& task = cfg.jets;
    task.events = get_count(j, "events", task.events);
    task.n_jet = get_count(j, "n_jet", task.n_jet);
    task.sqrt_s = get_num(j, "sqrt_s", task.sqrt_s);
    task.spread = get_num(j, "spread", task.spread);
    task.constituents_per_jet =
        get_count(j, "constituents_per_jet", task.constituents_per_jet);
    task.formulation = get_str(j, "formulation", task.formulation);
    if (task.formulation != "durham" && task.formulation != "angle" &&
        task.formulation != "thrust")
      cfg_error("jets.formulation must be durham, angle or thrust");
    task.event_seed =
        static_cast<std::uint64_t>(get_count(j, "event_seed", 1));
    task.constituents_file = get_str(j, "constituents_file", "");
  } else if (cfg.task == "vertex") {
    if (!root.contains("vertex")) cfg_error("missing 'vertex' section");
    const auto& v = root["vertex"];
    check_keys(v, "vertex",
               {"events", "n_vertices", "tracks", "separation_sigma",
                "delta_z", "m", "lambda", "event_seed"});
    auto& task = cfg.vertex;
    task.events = get_count(v, "events", task.events);
    task.n_vertices = get_count(v, "n_vertices", task.n_vertices);
    task.tracks = get_count(v, "tracks", task.tracks);
    task.separation_sigma =
        get_num(v, "separation_sigma", task.separation_sigma);
    task.delta_z = get_num(v, "delta_z", task.delta_z);
    task.m = get_num(v, "m", task.m);
    task.lambda_pen = get_num(v, "lambda", task.lambda_pen);
    task.event_seed =
        static_cast<std::uint64_t>(get_count(v, "event_seed", 1));
  } else if (cfg.task == "bench") {
    if (!root.contains("bench")) cfg_error("missing 'bench' section");
    const auto& b = root["bench"];
    check_keys(b, "bench", {"problems", "budget_seconds"});
    if (!b.contains("problems") || !b["problems"].is_array() ||
        b["problems"].empty())
      cfg_error("bench.problems must be a non-empty array");
    for (const auto& p : b["problems"])
      cfg.bench_task.problems.push_back(parse_problem(p, "bench.problems[]"));
    cfg.bench_task.budget_seconds = get_num(b, "budget_seconds", 5.0);
    if (!(cfg.bench_task.budget_seconds > 0.0))
      cfg_error("bench.budget_seconds must be > 0");
  }

  cfg.config_json = root.dump();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

}  // namespace qpr::bench
