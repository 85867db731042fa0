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

// Time evolution engines: no-jump propagation under the effective
// Hamiltonian, Lindblad master-equation integration on the density matrix,
// and the quantum-jump unraveling with seeded, splittable randomness.
//
// All engines share one fixed-step classical RK4 grid: every interval between
// consecutive nodes (0, schedule breakpoints, pulse times, T) is split into
// ceil(length / dt) equal steps, so a step never straddles a kink in H(t).

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "holo/models.hpp"
#include "holo/qcore.hpp"

namespace holo {

/// Writes H(t) for local stage time t into `out`.
using HamiltonianFn = std::function<void(double t, CMatrix& out)>;

/// Instantaneous (zero-duration) operation applied at `time`.
struct Pulse {
  double time;
  QOperator op;
};

/// One control stage: H(t) on [0, duration], dissipation channels, step size
/// and hard pulses.
struct LoopSpec {
  std::optional<ModelId> model;
  std::optional<ParamSchedule> schedule;
  BasisPtr basis;
  double duration = 0.0;
  HamiltonianFn hamiltonian;
  std::vector<JumpChannel> channels;
  double dt = 0.0;
  std::vector<Pulse> pulses;
  std::vector<double> breakpoints;
  /// Fastest rate in H (max of Omega, gamma); 0 disables the dt bound.
  double max_rate = 0.0;

  static LoopSpec for_schedule(ModelId model, const ParamSchedule& schedule, std::vector<JumpChannel> channels,
                               double dt);
  static LoopSpec custom(BasisPtr basis, double duration, HamiltonianFn hamiltonian,
                         std::vector<JumpChannel> channels, double dt);

  /// Throws ValidationError on dt > 0.02 / max_rate, pulses outside [0, T]
  /// or operators on a foreign basis.
  void validate() const;
};

/// 0.01 * min(1/omega, 1/gamma).
double default_dt(double omega, double gamma);

struct PropagationOptions {
  /// Reference vector whose overlap phase is unwrapped step by step. Pulses
  /// carry the reference along (r -> P r) so the phase stays continuous.
  std::optional<CVector> track;
  std::ostream* csv = nullptr;
  int csv_every = 1;
};

struct NoJumpResult {
  QState raw_final;
  double survival = 1.0;
  QState normalized_final;
  std::optional<double> tracked_phase;
  std::optional<CVector> tracking_vector;
};

NoJumpResult integrate_nojump(const LoopSpec& spec, const QState& psi0, const PropagationOptions& options = {});
NoJumpResult integrate_nojump(std::span<const LoopSpec> stages, const QState& psi0,
                              const PropagationOptions& options = {});
/// Resumes from a previous (sub-normalized) result; survival composes.
NoJumpResult continue_nojump(const LoopSpec& spec, const NoJumpResult& previous,
                             const PropagationOptions& options = {});

/// No-jump propagator on [t_begin, t_end] (local stage time), built column by
/// column on the stage grid restricted to that window.
CMatrix nojump_propagator(const LoopSpec& spec, double t_begin, double t_end);

QOperator integrate_master(const LoopSpec& spec, const QOperator& rho0);
QOperator integrate_master(std::span<const LoopSpec> stages, const QOperator& rho0);

struct JumpEvent {
  double time;  // protocol time (stage offsets included)
  int channel;
  int stage;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<JumpEvent> events;
  QState final_state;
  /// No-jump probability accumulated since the last event (the survival for
  /// jump-free trajectories).
  double weight = 1.0;
};

TrajectoryRecord sample_trajectory(const LoopSpec& spec, const QState& psi0, std::uint64_t seed);
TrajectoryRecord sample_trajectory(std::span<const LoopSpec> stages, const QState& psi0, std::uint64_t seed);

struct EnsembleAverage {
  QOperator mean;
  /// Frobenius norm of the per-entry standard errors.
  double stderr_frobenius = 0.0;
  int count = 0;
};

/// Trajectory i uses derive_seed(seed, i); the mean is reduced in index order,
/// so the result does not depend on `threads`. threads <= 0 uses worker_count().
EnsembleAverage average_trajectories(std::span<const LoopSpec> stages, const QState& psi0, int n,
                                     std::uint64_t seed, int threads = 0);
EnsembleAverage average_trajectories(const LoopSpec& spec, const QState& psi0, int n, std::uint64_t seed,
                                     int threads = 0);

/// HOLONOMY_THREADS if set and positive, otherwise hardware concurrency.
int worker_count();

}  // namespace holo
