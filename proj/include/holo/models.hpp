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

// Model Hamiltonians, dissipation channels, loop schedules and analytic dark
// states for the spin-1/2 (NMR), Lambda, tripod and superposed-loop systems.
//
// Notation: sigma_{ie} = |g_i><e|. Every multilevel basis carries an extra
// `sink` level that receives jumped population; no Hamiltonian couples it.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holo/qcore.hpp"

namespace holo {

enum class ModelId {
  kNmrSpinHalf,
  kLambdaFirst,
  kLambdaRefocus,
  kTripodFirst,
  kTripodNaiveRefocus,
  kSuperposedDual,
};

std::string_view to_string(ModelId model);
/// Accepts the snake-case and upper-case spellings ("lambda_first", "LAMBDA_FIRST").
ModelId parse_model(std::string_view name);

enum class Direction { kForward, kReversed };

namespace labels {
inline constexpr std::string_view kUp = "up";
inline constexpr std::string_view kDown = "down";
inline constexpr std::string_view kExcited = "e";
inline constexpr std::string_view kSink = "sink";
}  // namespace labels

/// Shared basis instance for a model.
const BasisPtr& model_basis(ModelId model);

/// Labels of |0>, |1>: (g1, g2) for the optical models, (down, up) for NMR.
std::array<std::string, 2> computational_labels(ModelId model);

/// Levels that no Hamiltonian of this model ever couples (besides the sink).
std::vector<std::string> spectator_labels(ModelId model);

/// Abelian models carry diagonal gates; their global factor is referenced to G[0][0].
bool is_abelian(ModelId model);

// ---------------------------------------------------------------------------
// Hamiltonians (angular-frequency units; Omega sets the scale).

QOperator nmr_hamiltonian(double omega, double theta, double phase);

enum class LambdaVariant { kFirst, kRefocus };
QOperator lambda_hamiltonian(LambdaVariant variant, double omega, double theta, double phi);

enum class TripodVariant { kFirst, kNaiveRefocus };
QOperator tripod_hamiltonian(TripodVariant variant, double omega, double theta, double phi);

QOperator superposed_hamiltonian(double omega, double theta, double phi);

/// Dispatches on the model. Writes into `out` (resized to the model dimension)
/// without allocating; this is the integrators' hot path.
void model_matrix(ModelId model, double omega, double theta, double phi, CMatrix& out);
QOperator model_hamiltonian(ModelId model, double omega, double theta, double phi);

// ---------------------------------------------------------------------------
// Dissipation.

struct JumpChannel {
  double rate = 0.0;           // kappa
  QOperator lowering;          // Gamma / sqrt(kappa)
  std::optional<std::string> sink_label;

  /// Gamma = sqrt(kappa) * lowering.
  QOperator op() const;
  /// Gamma^dagger Gamma.
  QOperator decay_profile() const;
};

/// NMR: sqrt(k)|down><up|. Lambda/tripod: sqrt(k)|sink><g3|.
/// Superposed: sqrt(k)|sink><g3| and sqrt(k)|sink><g4|.
std::vector<JumpChannel> jump_set(ModelId model, double kappa);

/// H - (i/2) sum_k Gamma_k^dagger Gamma_k.
QOperator effective_hamiltonian(const QOperator& h, const std::vector<JumpChannel>& channels);

/// Analytic dark states in the conventional order (D1 before D2). Throws
/// UnsupportedModelError for NMR.
std::vector<QState> dark_states(ModelId model, double theta, double phi);

// ---------------------------------------------------------------------------
// Loop schedules.

enum class SegmentKind { kRampIn, kLoop, kRampOut };

struct Segment {
  SegmentKind kind;
  double duration;
};

/// Constant-cone loop: smoothstep ramp of theta from 0 to theta0 at phi = 0,
/// one full phi revolution at angular velocity gamma, then the mirrored ramp.
/// A reversed schedule is the forward one evaluated at T - t.
class ParamSchedule {
 public:
  ParamSchedule(double omega, double gamma, double theta0, double ramp_fraction, Direction direction);

  double omega() const noexcept { return omega_; }
  double gamma() const noexcept { return gamma_; }
  double theta0() const noexcept { return theta0_; }
  double ramp_fraction() const noexcept { return ramp_fraction_; }
  Direction direction() const noexcept { return direction_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double duration() const noexcept { return total_; }

  double theta(double t) const;
  double phi(double t) const;
  /// Segment boundaries strictly inside (0, T).
  std::vector<double> breakpoints() const;

  ParamSchedule reversed() const;

 private:
  double forward_theta(double t) const;
  double forward_phi(double t) const;

  double omega_;
  double gamma_;
  double theta0_;
  double ramp_fraction_;
  Direction direction_;
  double ramp_;
  double loop_;
  double total_;
  std::vector<Segment> segments_;
};

struct ScheduleOptions {
  /// Reject Omega <= min_omega_over_gamma * gamma with AdiabaticityError.
  bool enforce_adiabaticity = true;
  double min_omega_over_gamma = 10.0;
};

ParamSchedule schedule_for_loop(ModelId model, double theta0, double gamma, double omega, Direction direction,
                                double ramp_fraction, const ScheduleOptions& options = {});

}  // namespace holo
