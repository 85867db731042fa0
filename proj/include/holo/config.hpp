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

// Experiment configuration: one JSON document per experiment. Rates are in
// units of omega unless `units.rates` is "absolute"; angles are radians.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "holo/schemes.hpp"

namespace holo {

struct NumericConfig {
  double dt = 0.0;  // 0 selects the default step
  int wilson_steps = 20000;
  int trajectories = 0;
  std::uint64_t seed = 0;
};

struct OutputConfig {
  std::string report = "report.json";
  std::string sweep_csv = "sweep.csv";
  std::string sweep_fit = "sweep_fit.json";
  std::string state_csv;  // per-step dump, written when verbosity >= 2
};

struct ExperimentConfig {
  SchemeKind scheme = SchemeKind::kSingle;
  ModelId model = ModelId::kLambdaFirst;
  double omega = 1.0;
  double gamma = 0.005;
  double kappa = 0.0;
  double theta0 = 0.7853981633974483;
  double ramp_fraction = 0.25;
  PulseAxis pulse_axis = PulseAxis::kX;
  bool rates_in_omega_units = true;
  NumericConfig numeric;
  OutputConfig output;
  int verbosity = 0;
  std::optional<SweepGrid> grid;
  nlohmann::json source;
};

/// Throws ValidationError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Resolved absolute parameters.
SchemeSpec to_scheme_spec(const ExperimentConfig& config);

}  // namespace holo
