// cbank: generate captive-test data, identify banking-model coefficients,
// attribute term significance, and simulate canal transits to grounding.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cbank/config.hpp"
#include "cbank/coefficients.hpp"
#include "cbank/dataset.hpp"
#include "cbank/errors.hpp"
#include "cbank/identify.hpp"
#include "cbank/shapley.hpp"
#include "cbank/sim.hpp"
#include "cbank/version.hpp"

namespace {

using nlohmann::json;

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw cbank::ValueError("cannot write file: " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

class Manifest {
 public:
  Manifest(const std::string& command, int argc, char** argv)
      : start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = "cbank";
    doc_["version"] = cbank::kVersion;
    doc_["command"] = command;
    std::vector<std::string> args(argv, argv + argc);
    doc_["argv"] = args;
  }

  json& doc() { return doc_; }

  void add_input(const std::string& path) { inputs_.push_back(path); }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  /// Written atomically alongside the primary output.
  void write(const std::string& primary_output) {
    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start_);
    doc_["inputs"] = inputs_;
    doc_["outputs"] = outputs_;
    doc_["duration_s"] = elapsed.count();
    write_text_atomic(primary_output + ".manifest.json", doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

cbank::CaptiveDataset load_pooled(const std::vector<std::string>& paths,
                                  const cbank::ModelConfig& cfg) {
  cbank::CaptiveDataset pooled;
  bool first = true;
  for (const std::string& p : paths) {
    cbank::CaptiveDataset d = cbank::load_csv(p, cfg.vessel, cfg.canal);
    if (first) {
      pooled = std::move(d);
      first = false;
    } else {
      cbank::append(pooled, d);
    }
  }
  return pooled;
}

std::string summary_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".summary.json");
  return p.string();
}

double balance_surge_input(const cbank::CoefficientSet& k, double u0) {
  return k.a[cbank::kAu] * u0 + k.a[cbank::kAuu] * std::abs(u0) * u0;
}

struct DatagenArgs {
  std::string config, truth, scenario, out;
  double amplitude = 0.0, period = 0.0, u0 = 1.0, duration = 60.0, dt = 0.05;
  std::vector<double> noise{0.0, 0.0, 0.0};
  std::uint64_t seed = 0;
  bool seed_given = false;
  char label = 'A';
};

int run_datagen(const DatagenArgs& a, Manifest& manifest) {
  if (a.noise.size() != 3) {
    throw cbank::ValueError("--noise expects three values: sX,sY,sN");
  }
  const bool noisy = a.noise[0] > 0 || a.noise[1] > 0 || a.noise[2] > 0;
  if (noisy && !a.seed_given) {
    throw cbank::ValueError("--noise requires an explicit --seed for reproducibility");
  }
  const cbank::ModelConfig cfg = cbank::load_model_config(a.config);
  const cbank::CoefficientSet truth = cbank::load_coefficients(a.truth);

  cbank::Scenario scenario;
  if (a.scenario == "harmonic_yaw") {
    scenario.kind = cbank::ScenarioKind::kHarmonicYaw;
  } else if (a.scenario == "harmonic_sway") {
    scenario.kind = cbank::ScenarioKind::kHarmonicSway;
  } else {
    throw cbank::ValueError("unknown scenario: " + a.scenario);
  }
  scenario.amplitude = a.amplitude;
  scenario.period = a.period;

  const cbank::CaptiveDataset d = cbank::synthesize(
      cfg.vessel, cfg.canal, truth, scenario, a.u0, a.duration, a.dt,
      {a.noise[0], a.noise[1], a.noise[2]}, a.seed, a.label);
  cbank::write_csv(a.out, d);

  manifest.add_input(a.config);
  manifest.add_input(a.truth);
  manifest.add_output(a.out);
  manifest.doc()["config"] = a.config;
  manifest.doc()["seed"] = a.seed;
  manifest.write(a.out);
  std::cout << "wrote " << d.size() << " records to " << a.out << "\n";
  return 0;
}

struct IdentifyArgs {
  std::vector<std::string> data;
  std::string config, out;
  std::uint64_t split_seed = 0;
  double train_fraction = 0.8;
  double uw_offset = 0.0;
};

int run_identify(const IdentifyArgs& a, Manifest& manifest) {
  const cbank::ModelConfig cfg = cbank::load_model_config(a.config);
  const cbank::CaptiveDataset d = load_pooled(a.data, cfg);
  const cbank::RegressionProblem problem = cbank::build_matrices(d, a.uw_offset);
  const cbank::SplitDataset split = cbank::split(d, a.train_fraction, a.split_seed);

  cbank::CoefficientSet coeffs = cbank::solve(problem.select(split.train));
  const auto val_mse = cbank::validate(problem.select(split.validation), coeffs);
  coeffs.diagnostics.validation_mse = val_mse;

  json provenance;
  provenance["command"] = "identify";
  provenance["data"] = a.data;
  provenance["config"] = a.config;
  provenance["split_seed"] = a.split_seed;
  provenance["train_fraction"] = a.train_fraction;
  provenance["uw_offset"] = a.uw_offset;
  cbank::save_coefficients(a.out, coeffs, provenance);

  for (std::size_t i = 0; i < 3; ++i) {
    std::cout << cbank::kSurgeNames[i] << " = " << coeffs.a[i] << "\n";
  }
  for (std::size_t i = 0; i < 7; ++i) {
    std::cout << cbank::kSwayNames[i] << " = " << coeffs.b[i] << "\n";
  }
  for (std::size_t i = 0; i < 7; ++i) {
    std::cout << cbank::kYawNames[i] << " = " << coeffs.c[i] << "\n";
  }
  for (const std::string& w : coeffs.diagnostics.warnings) {
    std::cout << "warning: " << w << "\n";
  }
  std::printf("validation MSE: X=%.6g Y=%.6g N=%.6g\n", val_mse[0], val_mse[1],
              val_mse[2]);

  for (const std::string& p : a.data) manifest.add_input(p);
  manifest.add_input(a.config);
  manifest.add_output(a.out);
  manifest.doc()["config"] = a.config;
  manifest.doc()["seed"] = a.split_seed;
  manifest.write(a.out);
  return 0;
}

struct ShapleyArgs {
  std::vector<std::string> data;
  std::string config, out, table, coeffs, block = "all";
  std::uint64_t split_seed = 0;
  double train_fraction = 0.8;
  double uw_offset = 0.0;
  int jobs = 1;
};

int run_shapley(const ShapleyArgs& a, Manifest& manifest) {
  const cbank::ModelConfig cfg = cbank::load_model_config(a.config);
  const cbank::CaptiveDataset d = load_pooled(a.data, cfg);
  const cbank::RegressionProblem problem = cbank::build_matrices(d, a.uw_offset);
  const cbank::SplitDataset split = cbank::split(d, a.train_fraction, a.split_seed);

  std::vector<cbank::Block> blocks;
  if (a.block == "all") {
    blocks = {cbank::Block::kX, cbank::Block::kY, cbank::Block::kN};
  } else if (a.block == "X") {
    blocks = {cbank::Block::kX};
  } else if (a.block == "Y") {
    blocks = {cbank::Block::kY};
  } else if (a.block == "N") {
    blocks = {cbank::Block::kN};
  } else {
    throw cbank::ValueError("--block must be one of X, Y, N, all");
  }

  json doc;
  doc["tool"] = "cbank";
  doc["version"] = cbank::kVersion;
  doc["split_seed"] = a.split_seed;
  doc["train_fraction"] = a.train_fraction;
  if (!a.coeffs.empty()) {
    doc["coefficients"] = cbank::coefficients_to_json(cbank::load_coefficients(a.coeffs));
    manifest.add_input(a.coeffs);
  }
  std::string tables;
  for (const cbank::Block block : blocks) {
    const cbank::ShapleyReport report =
        cbank::shapley_values(block, problem, split, a.jobs);
    doc["blocks"][report.block] = cbank::shapley_to_json(report);
    tables += cbank::format_table(report);
    tables += "\n";
  }
  write_text_atomic(a.out, doc.dump(2) + "\n");
  std::cout << tables;
  if (!a.table.empty()) {
    write_text_atomic(a.table, tables);
    manifest.add_output(a.table);
  }

  for (const std::string& p : a.data) manifest.add_input(p);
  manifest.add_input(a.config);
  manifest.add_output(a.out);
  manifest.doc()["config"] = a.config;
  manifest.doc()["seed"] = a.split_seed;
  manifest.write(a.out);
  return 0;
}

struct SimulateArgs {
  std::string coeffs, config, out;
  double y0 = 0.0, psi0 = 0.0, u0 = 1.0, v0 = 0.0, r0 = 0.0, z0 = 0.0;
  double dt = 0.01, t_max = 600.0;
  double x_in = std::numeric_limits<double>::quiet_NaN();
  double surge_mass = -1.0, clearance_floor = -1.0, uw_offset = 0.0;
  bool no_coriolis = false;
};

cbank::SimConfig make_sim_config(const SimulateArgs& a,
                                 const cbank::CoefficientSet& k) {
  cbank::SimConfig sim;
  sim.dt = a.dt;
  sim.t_max = a.t_max;
  sim.x_in = std::isnan(a.x_in) ? balance_surge_input(k, a.u0) : a.x_in;
  sim.surge_mass = a.surge_mass;
  sim.clearance_floor = a.clearance_floor;
  sim.uw_offset = a.uw_offset;
  sim.coriolis = !a.no_coriolis;
  sim.initial.y = a.y0;
  sim.initial.psi = a.psi0;
  sim.initial.u = a.u0;
  sim.initial.v = a.v0;
  sim.initial.r = a.r0;
  sim.initial.z = a.z0;
  return sim;
}

json outcome_json(const cbank::Outcome outcome, const cbank::Side side,
                  double x_ground, double t_ground) {
  json j;
  j["outcome"] = cbank::outcome_name(outcome);
  if (outcome == cbank::Outcome::kGrounded) {
    j["side"] = cbank::side_name(side);
    j["x_ground"] = x_ground;
    j["t_ground"] = t_ground;
  }
  return j;
}

int run_simulate(const SimulateArgs& a, Manifest& manifest) {
  const cbank::ModelConfig cfg = cbank::load_model_config(a.config);
  const cbank::CoefficientSet k = cbank::load_coefficients(a.coeffs);
  const cbank::SimConfig sim = make_sim_config(a, k);

  const cbank::SimResult res = cbank::run(sim, k, cfg.vessel, cfg.canal);
  cbank::write_trajectory_csv(a.out, res);

  json summary = outcome_json(res.outcome, res.side, res.x_ground, res.t_ground);
  summary["steps"] = res.trajectory.size();
  summary["x_in"] = sim.x_in;
  write_text_atomic(summary_path(a.out), summary.dump(2) + "\n");

  std::cout << "outcome: " << cbank::outcome_name(res.outcome);
  if (res.outcome == cbank::Outcome::kGrounded) {
    std::cout << " side=" << cbank::side_name(res.side)
              << " x_ground=" << res.x_ground << " t_ground=" << res.t_ground;
  }
  std::cout << "\n";

  manifest.add_input(a.config);
  manifest.add_input(a.coeffs);
  manifest.add_output(a.out);
  manifest.add_output(summary_path(a.out));
  manifest.doc()["config"] = a.config;
  manifest.write(a.out);
  return 0;
}

struct SweepArgs {
  SimulateArgs sim;
  std::string range;
  std::vector<double> y0s;
  int jobs = 1;
};

std::vector<double> parse_range(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      !(step > 0.0) || stop < start) {
    throw cbank::ValueError("--y0-range expects start:stop:step with step > 0");
  }
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double y = start + step * i;
    if (y > stop + 0.5 * step) break;
    values.push_back(y);
  }
  return values;
}

int run_sweep(const SweepArgs& a, Manifest& manifest) {
  const cbank::ModelConfig cfg = cbank::load_model_config(a.sim.config);
  const cbank::CoefficientSet k = cbank::load_coefficients(a.sim.coeffs);
  const cbank::SimConfig sim = make_sim_config(a.sim, k);

  std::vector<double> y0s = a.y0s;
  if (!a.range.empty()) {
    const auto from_range = parse_range(a.range);
    y0s.insert(y0s.end(), from_range.begin(), from_range.end());
  }
  if (y0s.empty()) throw cbank::ValueError("no sweep points: give --y0 or --y0-range");

  const auto points =
      cbank::sweep_grounding(y0s, sim, k, cfg.vessel, cfg.canal, a.jobs);
  cbank::write_sweep_csv(a.sim.out, points);

  // Report the grounding-side flip between adjacent grounded points, if any.
  std::size_t grounded = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& p = points[i];
    const auto& q = points[i + 1];
    if (p.outcome == cbank::Outcome::kGrounded) ++grounded;
    if (p.outcome == cbank::Outcome::kGrounded &&
        q.outcome == cbank::Outcome::kGrounded && p.side != q.side) {
      std::printf("side flip between ys0=%.3f (%s) and ys0=%.3f (%s)\n", p.ys0,
                  cbank::side_name(p.side), q.ys0, cbank::side_name(q.side));
    }
  }
  if (!points.empty() && points.back().outcome == cbank::Outcome::kGrounded) {
    ++grounded;
  }
  std::cout << grounded << " of " << points.size() << " points grounded; wrote "
            << a.sim.out << "\n";

  manifest.add_input(a.sim.config);
  manifest.add_input(a.sim.coeffs);
  manifest.add_output(a.sim.out);
  manifest.doc()["config"] = a.sim.config;
  manifest.write(a.sim.out);
  return 0;
}

void add_sim_options(CLI::App* cmd, SimulateArgs& a, bool with_y0) {
  cmd->add_option("--coeffs", a.coeffs, "coefficients JSON")->required();
  cmd->add_option("--config", a.config, "model config file")->required();
  if (with_y0) cmd->add_option("--y0", a.y0, "initial transverse offset [m]")->required();
  cmd->add_option("--psi0", a.psi0, "initial heading [rad]");
  cmd->add_option("--u0", a.u0, "initial surge velocity [m/s]");
  cmd->add_option("--v0", a.v0, "initial sway velocity [m/s]");
  cmd->add_option("--r0", a.r0, "initial yaw rate [rad/s]");
  cmd->add_option("--z0", a.z0, "constant sinkage [m]");
  cmd->add_option("--dt", a.dt, "integration step [s]");
  cmd->add_option("--t-max", a.t_max, "stop time [s]");
  cmd->add_option("--x-in", a.x_in,
                  "constant surge input force [N]; default balances drag at u0");
  cmd->add_option("--surge-mass", a.surge_mass,
                  "surge inertia [kg]; default: vessel dry mass");
  cmd->add_option("--clearance-floor", a.clearance_floor,
                  "domain-stop clearance [m]; default 0.05 B");
  cmd->add_option("--uw-offset", a.uw_offset, "ambient current added to u_w [m/s]");
  cmd->add_flag("--no-coriolis", a.no_coriolis,
                "drop the Coriolis/centripetal coupling of the mass matrix");
  cmd->add_option("--out", a.out, "output CSV")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-form canal banking effects: data, identification, simulation"};
  app.set_version_flag("--version", cbank::kVersion);
  app.require_subcommand(1);

  DatagenArgs datagen;
  CLI::App* cmd_datagen =
      app.add_subcommand("datagen", "generate a synthetic captive test");
  cmd_datagen->add_option("--config", datagen.config, "model config file")->required();
  cmd_datagen->add_option("--truth", datagen.truth, "generating coefficients JSON")
      ->required();
  cmd_datagen->add_option("--scenario", datagen.scenario,
                          "harmonic_yaw or harmonic_sway")->required();
  cmd_datagen->add_option("--amplitude", datagen.amplitude, "rad (yaw) or m (sway)")
      ->required();
  cmd_datagen->add_option("--period", datagen.period, "oscillation period [s]")
      ->required();
  cmd_datagen->add_option("--u0", datagen.u0, "tow speed [m/s]");
  cmd_datagen->add_option("--duration", datagen.duration, "test length [s]");
  cmd_datagen->add_option("--dt", datagen.dt, "sample interval [s]");
  cmd_datagen->add_option("--noise", datagen.noise, "sX,sY,sN standard deviations")
      ->delimiter(',')->expected(3);
  CLI::Option* seed_opt = cmd_datagen->add_option("--seed", datagen.seed, "noise seed");
  cmd_datagen->add_option("--label", datagen.label, "test tag A, B or C");
  cmd_datagen->add_option("--out", datagen.out, "output CSV")->required();

  IdentifyArgs identify;
  CLI::App* cmd_identify =
      app.add_subcommand("identify", "fit coefficients by constrained least squares");
  cmd_identify->add_option("--data", identify.data, "captive-test CSV (repeatable)")
      ->required();
  cmd_identify->add_option("--config", identify.config, "model config file")->required();
  cmd_identify->add_option("--split-seed", identify.split_seed, "train/validation seed");
  cmd_identify->add_option("--train-fraction", identify.train_fraction,
                           "training fraction in (0,1)");
  cmd_identify->add_option("--uw-offset", identify.uw_offset,
                           "ambient current added to u_w [m/s]");
  cmd_identify->add_option("--out", identify.out, "coefficients JSON")->required();

  ShapleyArgs shapley;
  CLI::App* cmd_shapley =
      app.add_subcommand("shapley", "exact Shapley attribution of the regressors");
  cmd_shapley->add_option("--data", shapley.data, "captive-test CSV (repeatable)")
      ->required();
  cmd_shapley->add_option("--config", shapley.config, "model config file")->required();
  cmd_shapley->add_option("--coeffs", shapley.coeffs,
                          "identified coefficients JSON (recorded in the report)");
  cmd_shapley->add_option("--split-seed", shapley.split_seed, "train/validation seed");
  cmd_shapley->add_option("--train-fraction", shapley.train_fraction,
                          "training fraction in (0,1)");
  cmd_shapley->add_option("--uw-offset", shapley.uw_offset,
                          "ambient current added to u_w [m/s]");
  cmd_shapley->add_option("--block", shapley.block, "X, Y, N or all");
  cmd_shapley->add_option("--jobs", shapley.jobs, "parallel coalition refits");
  cmd_shapley->add_option("--out", shapley.out, "report JSON")->required();
  cmd_shapley->add_option("--table", shapley.table, "also write the plain-text table");

  SimulateArgs simulate;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "integrate one free-running transit");
  add_sim_options(cmd_simulate, simulate, /*with_y0=*/true);

  SweepArgs sweep;
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "grounding distance over initial offsets");
  add_sim_options(cmd_sweep, sweep.sim, /*with_y0=*/false);
  cmd_sweep->add_option("--y0", sweep.y0s, "sweep point (repeatable)");
  cmd_sweep->add_option("--y0-range", sweep.range, "start:stop:step");
  cmd_sweep->add_option("--jobs", sweep.jobs, "parallel sweep points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  datagen.seed_given = seed_opt->count() > 0;

  try {
    if (cmd_datagen->parsed()) {
      Manifest manifest("datagen", argc, argv);
      return run_datagen(datagen, manifest);
    }
    if (cmd_identify->parsed()) {
      Manifest manifest("identify", argc, argv);
      return run_identify(identify, manifest);
    }
    if (cmd_shapley->parsed()) {
      Manifest manifest("shapley", argc, argv);
      return run_shapley(shapley, manifest);
    }
    if (cmd_simulate->parsed()) {
      Manifest manifest("simulate", argc, argv);
      return run_simulate(simulate, manifest);
    }
    if (cmd_sweep->parsed()) {
      Manifest manifest("sweep", argc, argv);
      return run_sweep(sweep, manifest);
    }
  } catch (const cbank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
