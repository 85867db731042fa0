// Copyright 2026 The holo-refocus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// holonomy: run experiment configs, parameter sweeps and the acceptance suite.
//
//   holonomy run <config.json>
//   holonomy sweep <config.json>
//   holonomy verify [--filter <substr>] [--dt-scale <f>]
//
// Exit codes: 0 success, 1 acceptance failure, 2 invalid input, 3 numerical
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "holo/acceptance.hpp"
#include "holo/config.hpp"
#include "holo/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

holo::QState equal_superposition(holo::ModelId model) {
  const auto comp = holo::computational_labels(model);
  const double r = 1.0 / std::sqrt(2.0);
  return holo::QState::from_components(holo::model_basis(model), {{comp[0], r}, {comp[1], r}});
}

void write_sweep(const holo::ExperimentConfig& cfg, const holo::SchemeSpec& spec) {
  const holo::SweepResult sweep = holo::scaling_sweep(spec, *cfg.grid);
  std::ostringstream csv;
  holo::write_sweep_csv(csv, sweep);
  holo::write_atomic(cfg.output.sweep_csv, csv.str());
  json fit = holo::sweep_fit_json(sweep);
  fit["resolved"] = holo::resolved_parameters(spec);
  holo::write_atomic(cfg.output.sweep_fit, fit.dump(2) + "\n");
  for (const auto& f : sweep.fits) {
    std::cout << "fit " << f.metric << " vs " << f.axis << ": slope ";
    if (std::isfinite(f.slope))
      std::cout << f.slope << " +/- " << f.stderr_slope;
    else
      std::cout << "n/a";
    std::cout << " (" << f.points << " points)\n";
  }
  std::cout << "wrote " << cfg.output.sweep_csv << " (" << sweep.rows.size() << " rows) and " << cfg.output.sweep_fit
            << "\n";
}

int cmd_run(const std::string& path) {
  const holo::ExperimentConfig cfg = holo::load_config(path);
  const holo::SchemeSpec spec = holo::to_scheme_spec(cfg);
  const holo::SchemeResult result = holo::run_scheme(spec);

  json report;
  report["tool"] = {{"name", "holonomy"}, {"version", holo::kToolVersion}};
  report["generated_at"] = holo::utc_timestamp();
  report["config"] = cfg.source;
  report["resolved"] = holo::resolved_parameters(spec);
  report["seed"] = spec.seed;
  report["result"] = holo::to_json(result);

  const auto stages = holo::protocol_stages(spec);
  const holo::QState input = equal_superposition(spec.model);
  if (cfg.numeric.trajectories > 0) {
    const holo::QOperator rho = holo::integrate_master(stages, holo::QOperator::outer(input, input));
    const holo::EnsembleAverage avg =
        holo::average_trajectories(stages, input, cfg.numeric.trajectories, spec.seed);
    report["ensemble"] = {{"trajectories", avg.count},
                          {"stderr", avg.stderr_frobenius},
                          {"trace_distance_to_master", holo::trace_distance(avg.mean.matrix(), rho.matrix())}};
  }
  if (cfg.verbosity >= 2 && !cfg.output.state_csv.empty()) {
    std::ostringstream dump;
    holo::PropagationOptions opt;
    opt.csv = &dump;
    holo::integrate_nojump(stages, input, opt);
    holo::write_atomic(cfg.output.state_csv, dump.str());
  }
  if (cfg.grid) write_sweep(cfg, spec);
  holo::write_atomic(cfg.output.report, report.dump(2) + "\n");

  const auto& m = result.metrics;
  std::cout << holo::to_string(spec.scheme) << " / " << holo::to_string(spec.model) << ": survival "
            << result.report.survival << ", fidelity " << m.fidelity << ", homogeneity defect "
            << m.homogeneity_defect << ", unitarity defect " << m.unitarity_defect << ", leakage "
            << result.report.leakage << "\n";
  if (result.commutator) std::cout << "commutator norm " << *result.commutator << "\n";
  std::cout << "wrote " << cfg.output.report << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& path) {
  const holo::ExperimentConfig cfg = holo::load_config(path);
  if (!cfg.grid) throw holo::ValidationError("grid", "sweep needs a grid block");
  write_sweep(cfg, holo::to_scheme_spec(cfg));
  return kExitOk;
}

int cmd_verify(const std::string& filter, double dt_scale) {
  if (!(dt_scale > 0.0)) throw holo::ValidationError("dt-scale", "must be > 0");
  holo::AcceptanceOptions opt;
  opt.filter = filter;
  opt.dt_scale = dt_scale;
  opt.log = &std::cout;
  const auto results = holo::run_acceptance(opt);
  if (results.empty()) throw holo::ValidationError("filter", "matched no criterion");
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed ? kExitFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative geometric and holonomic gate simulator"};
  app.require_subcommand(1);
  std::string run_path, sweep_path, filter;
  double dt_scale = 1.0;

  auto* run = app.add_subcommand("run", "Run the scheme described by a JSON config");
  run->add_option("config", run_path, "Experiment config")->required();
  auto* sweep = app.add_subcommand("sweep", "Run a dissipation scaling sweep");
  sweep->add_option("config", sweep_path, "Experiment config with a grid block")->required();
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--filter", filter, "Only criteria whose name contains this substring");
  verify->add_option("--dt-scale", dt_scale, "Multiply every step size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(run_path);
    if (*sweep) return cmd_sweep(sweep_path);
    if (*verify) return cmd_verify(filter, dt_scale);
  } catch (const holo::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const holo::LookupError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const holo::UnsupportedModelError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const holo::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInvalid;
}
