// Command line front end: stability certificates, order hierarchies,
// (K, gamma) sweeps, time-domain simulation and witness validation.
//
// Exit codes: 0 certificate / success, 1 no certificate / failed validation,
// 2 input error, 3 numerical trouble.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatstab/feasibility.hpp"
#include "heatstab/hierarchy.hpp"
#include "heatstab/simulator.hpp"
#include "heatstab/system.hpp"
#include "heatstab/witness_io.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace heatstab;

constexpr int kExitCertificate = 0;
constexpr int kExitNoCertificate = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalTrouble = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  json root;
  bool family = false;
  double family_K = 0.0;
  double family_gamma = 0.0;
  SystemData system;
  SolverOptions solver;
  SimConfig sim;
  std::optional<Eigen::VectorXd> X0;
  std::optional<Eigen::VectorXd> u0_grid;
  std::filesystem::path out_dir = ".";
  std::string prefix = "heatstab";
};

double number_at(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) {
    throw InputError("config field '" + field + "' must be a number");
  }
  return j[field].get<double>();
}

Eigen::VectorXd vector_field(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw InputError("config field '" + field + "' must be a nonempty array");
  }
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("config field '" + field + "' has a non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_field(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw InputError("config field '" + field + "' must be a nonempty nested array");
  }
  if (!j[0].is_array()) {
    // flat array: interpreted as a single column
    const Eigen::VectorXd v = vector_field(j, field);
    return v;
  }
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw InputError("config field '" + field + "' has ragged rows");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw InputError("config field '" + field + "' has a non-numeric entry");
      }
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open config file '" + path + "'");
  Config cfg;
  try {
    cfg.root = json::parse(is);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.root.contains("system") || !cfg.root["system"].is_object()) {
    throw InputError("config field 'system' must be an object");
  }
  const json& sysj = cfg.root["system"];
  const bool has_family = sysj.contains("family");
  const bool has_explicit = sysj.contains("A") || sysj.contains("B") || sysj.contains("C");
  if (has_family == has_explicit) {
    throw InputError("config field 'system' must contain exactly one of 'family' or explicit matrices A/B/C");
  }
  if (has_family) {
    const std::string name = sysj["family"].is_string() ? sysj["family"].get<std::string>() : "";
    if (name != "paper_example") {
      throw InputError("config field 'system.family' must be \"paper_example\"");
    }
    cfg.family = true;
    cfg.family_K = number_at(sysj, "K");
    cfg.family_gamma = number_at(sysj, "gamma");
    cfg.system = paper_example(cfg.family_K, cfg.family_gamma);
  } else {
    if (!sysj.contains("A") || !sysj.contains("B") || !sysj.contains("C")) {
      throw InputError("config field 'system' needs all of A, B, C for an explicit system");
    }
    cfg.system.A = matrix_field(sysj["A"], "system.A");
    Eigen::MatrixXd B = matrix_field(sysj["B"], "system.B");
    if (B.cols() != 1) throw InputError("config field 'system.B' must be a column");
    cfg.system.B = B;
    Eigen::MatrixXd C = matrix_field(sysj["C"], "system.C");
    if (C.cols() == 1 && C.rows() > 1) C = C.transpose().eval();  // flat array
    if (C.rows() != 1) throw InputError("config field 'system.C' must be a row");
    cfg.system.C = C;
    cfg.system.gamma = number_at(sysj, "gamma");
    try {
      cfg.system.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("config field 'system': ") + e.what());
    }
  }

  if (cfg.root.contains("solver")) {
    const json& s = cfg.root["solver"];
    if (!s.is_object()) throw InputError("config field 'solver' must be an object");
    if (s.contains("max_iterations")) cfg.solver.max_iterations = static_cast<int>(number_at(s, "max_iterations"));
    if (s.contains("margin_threshold")) cfg.solver.margin_threshold = number_at(s, "margin_threshold");
    if (s.contains("norm_box")) cfg.solver.norm_box = number_at(s, "norm_box");
    if (s.contains("verbosity")) cfg.solver.verbosity = static_cast<int>(number_at(s, "verbosity"));
  }
  if (cfg.root.contains("simulation")) {
    const json& s = cfg.root["simulation"];
    if (!s.is_object()) throw InputError("config field 'simulation' must be an object");
    if (s.contains("intervals")) cfg.sim.intervals = static_cast<int>(number_at(s, "intervals"));
    if (s.contains("safety")) cfg.sim.safety = number_at(s, "safety");
    if (s.contains("t_final")) cfg.sim.t_final = number_at(s, "t_final");
    if (s.contains("sample_stride")) cfg.sim.sample_stride = static_cast<int>(number_at(s, "sample_stride"));
    if (s.contains("X0")) cfg.X0 = vector_field(s["X0"], "simulation.X0");
    if (s.contains("u0_grid")) cfg.u0_grid = vector_field(s["u0_grid"], "simulation.u0_grid");
  }
  if (cfg.root.contains("output")) {
    const json& o = cfg.root["output"];
    if (!o.is_object()) throw InputError("config field 'output' must be an object");
    if (o.contains("directory")) cfg.out_dir = o["directory"].get<std::string>();
    if (o.contains("prefix")) cfg.prefix = o["prefix"].get<std::string>();
  }
  return cfg;
}

Eigen::VectorXd initial_state(const Config& cfg) {
  if (cfg.X0) {
    if (cfg.X0->size() != cfg.system.n()) {
      throw InputError("config field 'simulation.X0' has wrong dimension");
    }
    return *cfg.X0;
  }
  if (cfg.family) {
    Eigen::VectorXd x0(4);
    x0 << 0.0, 1.0, -1.0, 0.0;
    return x0;
  }
  return Eigen::VectorXd::Zero(cfg.system.n());
}

json witness_json(const Witness& w, int order) {
  return json::parse(witness_to_json_text(w, order));
}

json validation_json(const ValidationRecord& v) {
  json j;
  j["lambda_min_phi"] = v.lambda_min_phi;
  j["lambda_max_psi"] = v.lambda_max_psi;
  j["alpha"] = v.alpha;
  j["beta"] = v.beta;
  j["pass"] = v.pass;
  j["reason"] = v.reason;
  return j;
}

void emit(const json& report, const std::string& output_path) {
  const std::string text = report.dump(2);
  if (!output_path.empty()) {
    std::ofstream os(output_path);
    if (!os) throw InputError("cannot write output file '" + output_path + "'");
    os << text << '\n';
  }
  std::cout << text << std::endl;
}

int run_check(const Config& cfg, int order, const std::string& output_path,
              const std::string& witness_out) {
  if (!check_equilibrium(cfg.system)) {
    std::cerr << "error: equilibrium precheck failed (A + B C singular)\n";
    return kExitInputError;
  }
  const FeasibilityReport rep = solve_feasibility(cfg.system, order, cfg.solver);
  json j;
  j["command"] = "check";
  j["order"] = order;
  j["feasible"] = rep.feasible;
  j["status"] = to_string(rep.status);
  j["margin"] = rep.margin;
  j["wall_seconds"] = rep.wall_seconds;
  j["iterations"] = rep.solver_iterations;
  if (rep.witness) {
    j["witness"] = witness_json(*rep.witness, order);
    j["validation"] = validation_json(validate_witness(cfg.system, order, *rep.witness));
    if (!witness_out.empty()) save_witness(witness_out, *rep.witness, order);
  } else {
    j["witness"] = nullptr;
    j["validation"] = nullptr;
  }
  emit(j, output_path);
  if (rep.status == SolveStatus::NumericalTrouble) return kExitNumericalTrouble;
  return rep.feasible ? kExitCertificate : kExitNoCertificate;
}

int run_hierarchy(const Config& cfg, int max_order, bool full_scan,
                  const std::string& output_path) {
  if (!check_equilibrium(cfg.system)) {
    std::cerr << "error: equilibrium precheck failed (A + B C singular)\n";
    return kExitInputError;
  }
  const HierarchyResult hr =
      min_feasible_order(cfg.system, max_order, cfg.solver, full_scan);
  json j;
  j["command"] = "hierarchy";
  j["max_order"] = max_order;
  if (hr.min_order) {
    j["min_order"] = *hr.min_order;
  } else {
    j["min_order"] = nullptr;
  }
  json orders = json::array();
  bool any_trouble = false;
  for (const auto& att : hr.attempts) {
    json a;
    a["order"] = att.order;
    a["feasible"] = att.feasible;
    a["margin"] = att.margin;
    a["status"] = to_string(att.status);
    a["wall_seconds"] = att.wall_seconds;
    orders.push_back(a);
    any_trouble = any_trouble || att.status == SolveStatus::NumericalTrouble;
  }
  j["orders"] = orders;
  emit(j, output_path);
  if (hr.min_order) return kExitCertificate;
  return any_trouble ? kExitNumericalTrouble : kExitNoCertificate;
}

int run_sweep(const Config& cfg, int jobs, bool full_scan,
              const std::string& csv_path, const std::string& output_path) {
  if (!cfg.family) {
    throw InputError("sweep requires the parameterized family system ('system.family')");
  }
  if (!cfg.root.contains("sweep") || !cfg.root["sweep"].is_object()) {
    throw InputError("config field 'sweep' must be an object");
  }
  const json& sw = cfg.root["sweep"];
  const int kc = static_cast<int>(number_at(sw, "K_count"));
  const int gc = static_cast<int>(number_at(sw, "gamma_count"));
  if (kc < 1 || gc < 1) throw InputError("config fields 'sweep.K_count'/'sweep.gamma_count' must be >= 1");
  const Eigen::VectorXd K_grid =
      log_spaced(number_at(sw, "K_min"), number_at(sw, "K_max"), kc);
  const Eigen::VectorXd g_grid =
      log_spaced(number_at(sw, "gamma_min"), number_at(sw, "gamma_max"), gc);

  SweepOptions opts;
  opts.N_max = sw.contains("max_order") ? static_cast<int>(number_at(sw, "max_order")) : 6;
  opts.jobs = jobs;
  opts.full_scan = full_scan;
  opts.solver = cfg.solver;

  const SystemFamily family = [](double K, double g) { return paper_example(K, g); };
  const StabilityMap map = sweep(family, K_grid, g_grid, opts);

  const std::string csv =
      csv_path.empty() ? (cfg.out_dir / (cfg.prefix + "_map.csv")).string() : csv_path;
  const auto parent = std::filesystem::path(csv).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(csv);
  if (!os) throw InputError("cannot write CSV file '" + csv + "'");
  write_csv(map, os);

  json counts = json::object();
  int errors = 0;
  for (const auto& cell : map.cells) {
    if (cell.error) ++errors;
    counts[std::to_string(cell.min_order)] =
        counts.value(std::to_string(cell.min_order), 0) + 1;
  }
  json j;
  j["command"] = "sweep";
  j["cells"] = map.cells.size();
  j["max_order"] = opts.N_max;
  j["min_order_counts"] = counts;
  j["errors"] = errors;
  j["csv"] = csv;
  emit(j, output_path);
  return kExitCertificate;
}

int run_simulate(const Config& cfg, const std::string& witness_path, int order_flag,
                 const std::string& csv_path, const std::string& field_csv,
                 const std::string& output_path) {
  const Eigen::VectorXd X0 = initial_state(cfg);
  Trajectory traj;
  try {
    if (cfg.u0_grid) {
      traj = simulate(cfg.system, X0, *cfg.u0_grid, cfg.sim);
    } else {
      traj = simulate(cfg.system, X0, benchmark_initial_data(cfg.system, X0), cfg.sim);
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  std::optional<Witness> witness;
  int order = order_flag;
  if (!witness_path.empty()) {
    int stored_order = 0;
    witness = load_witness(witness_path, &stored_order);
    if (order < 0) order = stored_order;
  }

  json j;
  j["command"] = "simulate";
  j["diverged"] = traj.diverged;
  if (traj.diverged) {
    j["divergence_time"] = traj.divergence_time;
  } else {
    j["divergence_time"] = nullptr;
  }
  const double e0 = traj.energy(0);
  const double ef = traj.energy(traj.sample_count() - 1);
  j["E_initial"] = e0;
  j["E_final"] = ef;
  j["energy_ratio"] = (e0 > 0.0) ? ef / e0 : 0.0;
  j["fitted_decay_rate"] = fitted_energy_decay_rate(traj);
  j["samples"] = traj.sample_count();
  j["dt"] = traj.dt;
  j["dx"] = traj.dx;

  const std::vector<double>* lyap = nullptr;
  DecayReport decay;
  if (witness) {
    decay = decay_check(traj, *witness, order);
    lyap = &decay.lyapunov;
    j["order"] = order;
    j["vn_monotone_fraction"] = decay.monotone_fraction;
    j["vn_over_e_min"] = decay.vn_over_e_min;
    j["vn_over_e_max"] = decay.vn_over_e_max;
  } else {
    j["vn_monotone_fraction"] = nullptr;
  }

  const std::string csv = csv_path.empty()
                              ? (cfg.out_dir / (cfg.prefix + "_trajectory.csv")).string()
                              : csv_path;
  {
    const auto parent = std::filesystem::path(csv).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream os(csv);
    if (!os) throw InputError("cannot write CSV file '" + csv + "'");
    write_trajectory_csv(traj, os, lyap);
  }
  j["csv"] = csv;
  if (!field_csv.empty()) {
    std::ofstream os(field_csv);
    if (!os) throw InputError("cannot write CSV file '" + field_csv + "'");
    write_field_csv(traj, os);
    j["field_csv"] = field_csv;
  }
  emit(j, output_path);
  return kExitCertificate;
}

int run_validate(const Config& cfg, const std::string& witness_path, int order_flag,
                 const std::string& output_path) {
  int order = order_flag;
  int stored_order = 0;
  const Witness w = load_witness(witness_path, &stored_order);
  if (order < 0) order = stored_order;
  const ValidationRecord rec = validate_witness(cfg.system, order, w);
  json j;
  j["command"] = "validate";
  j["order"] = order;
  j["validation"] = validation_json(rec);
  emit(j, output_path);
  return rec.pass ? kExitCertificate : kExitNoCertificate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential-stability certificates for an ODE coupled to a 1-d heat equation"};
  app.require_subcommand(1);

  std::string config_path, output_path, witness_path, witness_out, csv_path, field_csv;
  int order = 0, max_order = 8, jobs = 1;
  bool full_scan = false;

  auto* check = app.add_subcommand("check", "Solve the stability conditions at one order");
  check->add_option("--config", config_path, "JSON problem description")->required();
  check->add_option("--order", order, "Truncation order N")->required();
  check->add_option("--output", output_path, "Write the JSON report here as well");
  check->add_option("--witness-out", witness_out, "Write the witness JSON here");

  auto* hier = app.add_subcommand("hierarchy", "Scan orders 0..N for the smallest certificate");
  hier->add_option("--config", config_path, "JSON problem description")->required();
  hier->add_option("--max-order", max_order, "Largest order to try")->required();
  hier->add_flag("--full-scan", full_scan, "Do not stop at the first feasible order");
  hier->add_option("--output", output_path, "Write the JSON report here as well");

  auto* sw = app.add_subcommand("sweep", "Stability map over a (K, gamma) grid");
  sw->add_option("--config", config_path, "JSON problem description")->required();
  sw->add_option("--jobs", jobs, "Parallel cell solves");
  sw->add_flag("--full-scan", full_scan, "Solve every order in every cell");
  sw->add_option("--csv", csv_path, "Stability map CSV path");
  sw->add_option("--output", output_path, "Write the JSON summary here as well");

  auto* sim = app.add_subcommand("simulate", "Integrate the coupled system in time");
  sim->add_option("--config", config_path, "JSON problem description")->required();
  sim->add_option("--witness", witness_path, "Witness JSON for the Lyapunov decay check");
  sim->add_option("--order", order, "Truncation order for the decay check")
      ->default_val(-1);
  sim->add_option("--csv", csv_path, "Trajectory CSV path");
  sim->add_option("--field-csv", field_csv, "Full-field CSV path (t,x,u)");
  sim->add_option("--output", output_path, "Write the JSON summary here as well");

  auto* val = app.add_subcommand("validate", "Re-check a stored witness by eigenvalues");
  val->add_option("--config", config_path, "JSON problem description")->required();
  val->add_option("--witness", witness_path, "Witness JSON")->required();
  val->add_option("--order", order, "Truncation order N")->default_val(-1);
  val->add_option("--output", output_path, "Write the JSON report here as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    const Config cfg = load_config(config_path);
    if (app.got_subcommand(check)) {
      if (order < 0) throw InputError("--order must be >= 0");
      return run_check(cfg, order, output_path, witness_out);
    }
    if (app.got_subcommand(hier)) {
      if (max_order < 0) throw InputError("--max-order must be >= 0");
      return run_hierarchy(cfg, max_order, full_scan, output_path);
    }
    if (app.got_subcommand(sw)) return run_sweep(cfg, jobs, full_scan, csv_path, output_path);
    if (app.got_subcommand(sim))
      return run_simulate(cfg, witness_path, order, csv_path, field_csv, output_path);
    if (app.got_subcommand(val)) return run_validate(cfg, witness_path, order, output_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalTrouble;
  }
  return kExitInputError;
}
