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

#include "holo/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace holo {

using nlohmann::json;

json to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Mat2& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) rows.push_back(json::array({to_json(m(i, 0)), to_json(m(i, 1))}));
  return rows;
}

json to_json(const GateReport& r) {
  json tracked = json::array();
  for (const auto& p : r.tracked_phases) tracked.push_back(p ? json(*p) : json(nullptr));
  return json{{"gate", to_json(r.gate)},
              {"survival", r.survival},
              {"column_survival", {r.column_survival[0], r.column_survival[1]}},
              {"global_factor", to_json(r.global_factor)},
              {"normalized_gate", to_json(r.normalized_gate)},
              {"leakage", r.leakage},
              {"homogeneity", r.homogeneity},
              {"tracked_phases", tracked}};
}

json to_json(const PhaseReport& r) {
  json j{{"dynamical", to_json(r.dynamical)},
         {"geometric", to_json(r.geometric)},
         {"total", to_json(r.total)},
         {"convention", r.convention}};
  if (r.reference_phi_g) j["reference_phi_g"] = *r.reference_phi_g;
  if (r.reference_phi_d) j["reference_phi_d"] = *r.reference_phi_d;
  return j;
}

json to_json(const DistortionMetrics& m) {
  return json{{"unitarity_defect", m.unitarity_defect},
              {"fidelity", m.fidelity},
              {"homogeneity_defect", m.homogeneity_defect},
              {"log_anisotropy", m.log_anisotropy}};
}

json to_json(const SchemeResult& r) {
  json j{{"gate_report", to_json(r.report)},
         {"ideal_gate", to_json(r.ideal)},
         {"phi_g_oracle", r.phi_g_oracle},
         {"metrics", to_json(r.metrics)},
         {"phases", to_json(r.phases)},
         {"duration", r.duration}};
  if (r.commutator) j["commutator_norm"] = *r.commutator;
  if (!r.parts.empty()) {
    json parts = json::array();
    for (const auto& p : r.parts) parts.push_back(to_json(p));
    j["parts"] = parts;
  }
  return j;
}

json sweep_fit_json(const SweepResult& sweep) {
  json fits = json::array();
  for (const auto& f : sweep.fits) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    fits.push_back(json{{"metric", f.metric},
                        {"axis", f.axis},
                        {"slope", num(f.slope)},
                        {"stderr", num(f.stderr_slope)},
                        {"points", f.points}});
  }
  json flagged = json::array();
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& r = sweep.rows[i];
    if (r.in_regime && r.error.empty()) continue;
    json e{{"row", i},
           {"kappa_over_gamma", r.kappa_over_gamma},
           {"kappa_over_omega", r.kappa_over_omega},
           {"in_regime", r.in_regime}};
    if (!r.error.empty()) e["error"] = r.error;
    flagged.push_back(e);
  }
  return json{{"fits", fits}, {"excluded_rows", flagged}, {"rows", sweep.rows.size()}};
}

json resolved_parameters(const SchemeSpec& s) {
  return json{{"scheme", std::string(to_string(s.scheme))},
              {"model", std::string(to_string(s.model))},
              {"omega", s.omega},
              {"gamma", s.gamma},
              {"kappa", s.kappa},
              {"theta0", s.theta0},
              {"ramp_fraction", s.ramp_fraction},
              {"dt", s.resolved_dt()},
              {"pulse_axis", s.pulse_axis == PulseAxis::kX ? "x" : "y"},
              {"wilson_steps", s.wilson_steps},
              {"seed", s.seed}};
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    if (!out) throw Error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, target);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace holo
