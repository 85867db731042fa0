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

#include "holo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace holo {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ValidationError(prefix + it.key(), "unknown key");
}

const json& object_at(const json& doc, const std::string& key, const std::string& field) {
  const json& v = doc.at(key);
  if (!v.is_object()) throw ValidationError(field, "must be an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& field, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(field, "must be a number");
  return v.get<double>();
}

std::string text(const json& obj, const std::string& key, const std::string& field, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(field, "must be a string");
  return v.get<std::string>();
}

long long integer(const json& obj, const std::string& key, const std::string& field, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(field, "must be an integer");
  return v.get<long long>();
}

std::vector<double> number_list(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(field, "must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ValidationError(field, "must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ModelId default_model(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::kNmrDouble: return ModelId::kNmrSpinHalf;
    case SchemeKind::kTripodNaiveDouble: return ModelId::kTripodFirst;
    case SchemeKind::kSuperposed: return ModelId::kSuperposedDual;
    default: return ModelId::kLambdaFirst;
  }
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config", "top level must be a JSON object");
  reject_unknown(doc,
                 {"scheme", "model", "omega", "gamma", "kappa", "theta0", "ramp_fraction", "pulse_axis", "numeric",
                  "output", "verbosity", "units", "grid"},
                 "");
  ExperimentConfig c;
  c.source = doc;
  if (!doc.contains("scheme")) throw ValidationError("scheme", "missing");
  c.scheme = parse_scheme(text(doc, "scheme", "scheme", ""));
  c.model = doc.contains("model") ? parse_model(text(doc, "model", "model", "")) : default_model(c.scheme);

  if (doc.contains("units")) {
    const json& u = object_at(doc, "units", "units");
    reject_unknown(u, {"rates"}, "units.");
    const std::string rates = text(u, "rates", "units.rates", "omega");
    if (rates == "omega")
      c.rates_in_omega_units = true;
    else if (rates == "absolute")
      c.rates_in_omega_units = false;
    else
      throw ValidationError("units.rates", "must be \"omega\" or \"absolute\"");
  }

  c.omega = number(doc, "omega", "omega", c.omega);
  c.gamma = number(doc, "gamma", "gamma", c.gamma);
  c.kappa = number(doc, "kappa", "kappa", c.kappa);
  c.theta0 = number(doc, "theta0", "theta0", c.theta0);
  c.ramp_fraction = number(doc, "ramp_fraction", "ramp_fraction", c.ramp_fraction);
  if (!(c.omega > 0.0)) throw ValidationError("omega", "must be > 0");
  if (!(c.gamma > 0.0)) throw ValidationError("gamma", "must be > 0");
  if (!(c.kappa >= 0.0)) throw ValidationError("kappa", "must be >= 0");

  const std::string axis = text(doc, "pulse_axis", "pulse_axis", "x");
  if (axis == "x")
    c.pulse_axis = PulseAxis::kX;
  else if (axis == "y")
    c.pulse_axis = PulseAxis::kY;
  else
    throw ValidationError("pulse_axis", "must be \"x\" or \"y\"");

  if (doc.contains("numeric")) {
    const json& n = object_at(doc, "numeric", "numeric");
    reject_unknown(n, {"dt", "wilson_steps", "trajectories", "seed"}, "numeric.");
    c.numeric.dt = number(n, "dt", "numeric.dt", 0.0);
    c.numeric.wilson_steps = static_cast<int>(integer(n, "wilson_steps", "numeric.wilson_steps", 20000));
    const long long traj = integer(n, "trajectories", "numeric.trajectories", 0);
    const long long seed = integer(n, "seed", "numeric.seed", 0);
    if (c.numeric.dt < 0.0) throw ValidationError("numeric.dt", "must be >= 0");
    if (traj < 0) throw ValidationError("numeric.trajectories", "must be >= 0");
    if (seed < 0) throw ValidationError("numeric.seed", "must be >= 0");
    c.numeric.trajectories = static_cast<int>(traj);
    c.numeric.seed = static_cast<std::uint64_t>(seed);
  }
  if (doc.contains("output")) {
    const json& o = object_at(doc, "output", "output");
    reject_unknown(o, {"report", "sweep_csv", "sweep_fit", "state_csv"}, "output.");
    c.output.report = text(o, "report", "output.report", c.output.report);
    c.output.sweep_csv = text(o, "sweep_csv", "output.sweep_csv", c.output.sweep_csv);
    c.output.sweep_fit = text(o, "sweep_fit", "output.sweep_fit", c.output.sweep_fit);
    c.output.state_csv = text(o, "state_csv", "output.state_csv", c.output.state_csv);
  }
  c.verbosity = static_cast<int>(integer(doc, "verbosity", "verbosity", 0));
  if (doc.contains("grid")) {
    const json& g = object_at(doc, "grid", "grid");
    reject_unknown(g, {"kappa_over_gamma", "kappa_over_omega"}, "grid.");
    SweepGrid grid;
    grid.kappa_over_gamma = number_list(g, "kappa_over_gamma", "grid.kappa_over_gamma");
    grid.kappa_over_omega = number_list(g, "kappa_over_omega", "grid.kappa_over_omega");
    c.grid = grid;
  }
  to_scheme_spec(c).validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

SchemeSpec to_scheme_spec(const ExperimentConfig& c) {
  const double scale = c.rates_in_omega_units ? c.omega : 1.0;
  SchemeSpec s;
  s.scheme = c.scheme;
  s.model = c.model;
  s.omega = c.omega;
  s.gamma = c.gamma * scale;
  s.kappa = c.kappa * scale;
  s.theta0 = c.theta0;
  s.ramp_fraction = c.ramp_fraction;
  s.dt = c.numeric.dt / scale;
  s.seed = c.numeric.seed;
  s.pulse_axis = c.pulse_axis;
  s.wilson_steps = c.numeric.wilson_steps;
  return s;
}

}  // namespace holo
