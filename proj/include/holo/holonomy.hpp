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

// Gates, phases and holonomies extracted from evolutions, the closed-form
// complex dynamical and Berry phases of the dissipative spin-1/2, and an
// independent Wilson-loop oracle for the adiabatic holonomy.
//
// Phase convention: a complex phase p multiplies an amplitude by exp(-i p),
// so decay shows up as a negative imaginary part.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holo/dynamics.hpp"
#include "holo/models.hpp"
#include "holo/qcore.hpp"

namespace holo {

struct PhaseReport {
  Complex dynamical{};
  Complex geometric{};
  Complex total{};
  std::string convention;
  /// Closed-form coefficients as printed in the reference text (reported,
  /// never asserted).
  std::optional<double> reference_phi_g;
  std::optional<double> reference_phi_d;
};

PhaseReport make_phase_report(Complex dynamical, Complex geometric, std::string convention);

struct GateReport {
  Mat2 gate = Mat2::Zero();  // raw, sub-normalized
  double survival = 1.0;     // mean of the column survivals
  std::array<double, 2> column_survival{1.0, 1.0};
  Complex global_factor{1.0, 0.0};
  Mat2 normalized_gate = Mat2::Identity();
  double leakage = 0.0;
  /// sigma_max^2 - sigma_min^2 of the raw gate.
  double homogeneity = 0.0;
  std::array<std::optional<double>, 2> tracked_phases;
};

/// Runs the protocol for one computational input and returns the no-jump result.
using ColumnRunner = std::function<NoJumpResult(const QState& input)>;

/// Assembles the gate column by column. Throws AdiabaticityError when more
/// than `leakage_limit` of the surviving population ends outside the
/// computational levels.
GateReport extract_gate(ModelId model, const ColumnRunner& run, double leakage_limit = 0.05);

/// Splits a raw gate into global factor and normalized gate. Abelian models
/// reference the phase to G[0][0]; otherwise the phase is sqrt(det W),
/// W = polar(G), so the normalized gate is special unitary up to distortion.
void normalize_gate(GateReport& report, bool abelian);

struct HolonomyMatrix {
  int dim = 0;  // analytic dark-state count (1 for the spin-1/2 eigenstate)
  CMatrix matrix;
  int path_steps = 0;
  /// Dimension of the numerically transported subspace (>= dim).
  int transported_dim = 0;
  double unitarity_defect = 0.0;
};

/// Ordered product of polar-unitarized overlap matrices along the schedule,
/// closed with the overlap between the final and initial frames.
HolonomyMatrix wilson_holonomy(ModelId model, const ParamSchedule& schedule, int steps);

/// Scalar phase of a 1x1 holonomy, or the rotation angle phi of a 2x2 one
/// written as exp(i phi sigma_y).
double holonomy_angle(const HolonomyMatrix& h);
double rotation_angle(const Mat2& u);

/// Omega_bar = Omega * sqrt(sin^2 + (cos - i kappa / 2 Omega)^2), principal root.
Complex omega_bar(double omega, double kappa, double theta);
Complex complex_dynamical_phase(double omega, double kappa, double theta, double T, int branch);
Complex complex_berry_phase(double omega, double kappa, double theta, int branch);

/// Reference closed forms for the Lambda, tripod and superposed loops.
PhaseReport analytic_phases(ModelId model, double theta0, double kappa, double gamma);

struct DistortionMetrics {
  double unitarity_defect = 0.0;    // || G^dagger G / s_max^2 - 1 ||_F
  double fidelity = 0.0;            // |tr(ideal^dagger N)| / 2
  double homogeneity_defect = 0.0;  // (s_max - s_min) / s_max
  double log_anisotropy = 0.0;      // ln(s_max / s_min)
};

DistortionMetrics gate_distortion(const GateReport& report, const Mat2& ideal);

struct CyclicPhases {
  Complex plus{};
  Complex minus{};
  Complex target_plus{};
  Complex target_minus{};
};

/// Complex phases of the two Floquet branches of a spin-1/2 loop, measured
/// from the eigenvalues of the one-period no-jump monodromy. Real parts are
/// unwrapped against the integrated instantaneous eigenvalues; targets are
/// the closed forms evaluated at the schedule's plateau angle.
CyclicPhases measure_cyclic_phases(const LoopSpec& spec, int segments = 64);

/// Maps x to (-pi, pi].
double wrap_phase(double x);

}  // namespace holo
