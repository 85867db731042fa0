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

// Control protocols built from the loop stages: single loops, the spin-1/2
// pi-pulse double loop, the Lambda basis-swap double loop, the naive tripod
// refocus and the superposed loop, plus dissipation scaling sweeps.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holo/dynamics.hpp"
#include "holo/holonomy.hpp"
#include "holo/models.hpp"

namespace holo {

enum class SchemeKind { kSingle, kNmrDouble, kLambdaDouble, kTripodNaiveDouble, kSuperposed };

std::string_view to_string(SchemeKind scheme);
SchemeKind parse_scheme(std::string_view name);

enum class PulseAxis { kX, kY };

struct SchemeSpec {
  SchemeKind scheme = SchemeKind::kSingle;
  ModelId model = ModelId::kLambdaFirst;
  double omega = 1.0;
  double gamma = 0.005;
  double kappa = 0.0;
  double theta0 = 0.7853981633974483;
  double ramp_fraction = 0.25;
  double dt = 0.0;  // 0 selects default_dt(omega, gamma)
  std::uint64_t seed = 0;
  PulseAxis pulse_axis = PulseAxis::kX;
  int wilson_steps = 20000;
  bool enforce_adiabaticity = true;

  double resolved_dt() const { return dt > 0.0 ? dt : default_dt(omega, gamma); }
  /// Throws ValidationError naming the offending field.
  void validate() const;
};

struct SchemeResult {
  GateReport report;
  Mat2 ideal = Mat2::Identity();  // oracle gate on the computational basis
  double phi_g_oracle = 0.0;
  DistortionMetrics metrics;
  PhaseReport phases;
  /// Individually extracted loops of a composite protocol.
  std::vector<GateReport> parts;
  std::optional<double> commutator;
  double duration = 0.0;
};

/// Stages (with pulses) for the scheme; the protocol the CLI and the engine
/// cross-checks integrate.
std::vector<LoopSpec> protocol_stages(const SchemeSpec& spec);

/// Loop stage of one model in one direction under the scheme parameters.
LoopSpec loop_stage(const SchemeSpec& spec, ModelId model, Direction direction);

/// Gate of the adiabatic loop predicted by the Wilson oracle, on the
/// computational basis (dark-state phase on |1> for the Lambda variants,
/// spin-1/2 eigenstate phase for NMR). Also returns the oracle angle.
Mat2 oracle_gate(ModelId model, const ParamSchedule& schedule, int steps, double* angle = nullptr);

SchemeResult run_single_loop(const SchemeSpec& spec, ModelId model);
SchemeResult run_double_loop_nmr(const SchemeSpec& spec);
SchemeResult run_double_loop_lambda(const SchemeSpec& spec);
SchemeResult run_naive_refocus_tripod(const SchemeSpec& spec);
SchemeResult run_superposed_loop(const SchemeSpec& spec);
SchemeResult run_scheme(const SchemeSpec& spec);

/// (phi_0 - phi_1) / 2 from the continuously tracked column phases.
double tracked_half_difference(const GateReport& report);

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepGrid {
  std::vector<double> kappa_over_gamma;
  std::vector<double> kappa_over_omega;
};

struct SweepRow {
  SchemeKind scheme;
  ModelId model;
  double kappa_over_gamma = 0.0;
  double kappa_over_omega = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double omega = 0.0;
  double theta0 = 0.0;
  double survival = 0.0;
  double fidelity = 0.0;
  double homogeneity_defect = 0.0;
  double unitarity_defect = 0.0;
  double leakage = 0.0;
  double phi_g_oracle = 0.0;
  double log_anisotropy = 0.0;
  /// || N(kappa) - N(0) ||_F against a dissipation-free run at the same point.
  double residual = 0.0;
  bool in_regime = true;
  std::string error;
};

struct SlopeFit {
  std::string metric;
  std::string axis;
  double slope = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SlopeFit> fits;
};

/// Ordinary least squares of ln(y) on ln(x); stderr from the residual variance.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Multiple regression of ln(y) on ln(x1) and ln(x2); returns both slopes.
std::array<SlopeFit, 2> fit_loglog2(const std::vector<double>& x1, const std::vector<double>& x2,
                                    const std::vector<double>& y);

/// Points use omega from `base`, kappa = (kappa/omega) * omega and
/// gamma = kappa / (kappa/gamma). Rows with kappa/omega > 0.5 or
/// omega/gamma < 10 are flagged out of regime and excluded from the fits.
SweepResult scaling_sweep(const SchemeSpec& base, const SweepGrid& grid, int threads = 0);

void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace holo
