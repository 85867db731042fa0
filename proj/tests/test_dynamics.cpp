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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "holo/dynamics.hpp"
#include "holo/errors.hpp"

using namespace holo;

namespace {

constexpr double kPi = 3.14159265358979323846;

const BasisPtr& pair_basis() {
  static const BasisPtr b = make_basis({"a", "b"});
  return b;
}

// H = 0 with a single channel whose profile is kappa * identity.
LoopSpec uniform_decay(double kappa, double duration, double dt) {
  JumpChannel ch{kappa, QOperator::identity(pair_basis()), std::nullopt};
  return LoopSpec::custom(
      pair_basis(), duration, [](double, CMatrix& m) { m.setZero(2, 2); }, {ch}, dt);
}

LoopSpec nmr_stage(double kappa, double theta0, double ramp, double dt = 0.01) {
  const auto sched = schedule_for_loop(ModelId::kNmrSpinHalf, theta0, 0.05, 1.0, Direction::kForward, ramp);
  return LoopSpec::for_schedule(ModelId::kNmrSpinHalf, sched, jump_set(ModelId::kNmrSpinHalf, kappa), dt);
}

QState nmr_plus() {
  const BasisPtr& b = model_basis(ModelId::kNmrSpinHalf);
  return QState(b, CVector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0)));
}

}  // namespace

TEST_CASE("free evolution leaves the state untouched") {
  const QState psi = QState::basis_state(pair_basis(), "a");
  const auto r = integrate_nojump(uniform_decay(0.0, 3.0, 0.01), psi);
  CHECK((r.raw_final.amplitudes() - psi.amplitudes()).norm() < 1e-15);
  CHECK(r.survival == 1.0);
}

TEST_CASE("uniform decay reproduces the exponential survival") {
  const double kappa = 0.4, duration = 5.0;
  const QState psi = QState::basis_state(pair_basis(), "b");
  const auto r = integrate_nojump(uniform_decay(kappa, duration, 0.005), psi);
  CHECK(std::abs(r.survival / std::exp(-kappa * duration) - 1.0) < 1e-10);
  CHECK(std::abs(r.normalized_final.amplitude("b") - 1.0) < 1e-12);
}

TEST_CASE("lambda loop survival follows the dark-state decay integral") {
  const double kappa = 0.002, gamma = 0.02, theta0 = kPi / 4;
  const auto sched = schedule_for_loop(ModelId::kLambdaFirst, theta0, gamma, 1.0, Direction::kForward, 0.25);
  const auto spec = LoopSpec::for_schedule(ModelId::kLambdaFirst, sched, jump_set(ModelId::kLambdaFirst, kappa),
                                           default_dt(1.0, gamma));
  const auto r = integrate_nojump(spec, QState::basis_state(model_basis(ModelId::kLambdaFirst), "g2"));

  // phi_d = -1/2 int kappa sin^2(theta) dt by Simpson on the schedule.
  const int n = 20000;
  const double h = sched.duration() / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double s = std::sin(sched.theta(k * h));
    acc += w * s * s;
  }
  const double phi_d = -0.5 * kappa * acc * h / 3.0;
  CHECK(std::abs(r.survival / std::exp(2.0 * phi_d) - 1.0) < 5e-3);
}

TEST_CASE("input validation") {
  const auto spec = uniform_decay(0.1, 1.0, 0.01);
  const QState half(pair_basis(), CVector::Constant(2, Complex(0.5, 0.0)));
  CHECK_THROWS_AS(integrate_nojump(spec, half), ValidationError);

  auto coarse = nmr_stage(0.0, 0.5, 0.0, 0.05);
  CHECK_THROWS_AS(coarse.validate(), ValidationError);
  CHECK_THROWS_AS(integrate_nojump(coarse, nmr_plus()), ValidationError);

  // A gain term in H makes the norm grow.
  const auto bad = LoopSpec::custom(
      pair_basis(), 1.0, [](double, CMatrix& m) { m = CMatrix::Identity(2, 2) * Complex(0.0, 0.5); }, {}, 0.01);
  CHECK_THROWS_AS(integrate_nojump(bad, QState::basis_state(pair_basis(), "a")), IntegratorViolationError);
  CHECK_THROWS_AS(jump_set(ModelId::kNmrSpinHalf, -0.5), ValidationError);
}

TEST_CASE("survival is monotone along the csv dump") {
  std::ostringstream csv;
  PropagationOptions opt;
  opt.csv = &csv;
  integrate_nojump(nmr_stage(0.02, 1.0, 0.25), nmr_plus(), opt);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("t,", 0) == 0);
  double prev = 2.0;
  int rows = 0;
  bool monotone = true;
  while (std::getline(in, line)) {
    const double s = std::stod(line.substr(line.rfind(',') + 1));
    monotone = monotone && s <= prev + 1e-15;
    prev = s;
    ++rows;
  }
  CHECK(monotone);
  CHECK(rows > 100);
}

TEST_CASE("stage splitting is bitwise identical") {
  const auto sched = schedule_for_loop(ModelId::kNmrSpinHalf, 0.8, 0.05, 1.0, Direction::kForward, 0.25);
  auto a = LoopSpec::for_schedule(ModelId::kNmrSpinHalf, sched, jump_set(ModelId::kNmrSpinHalf, 0.01), 0.01);
  auto b = LoopSpec::for_schedule(ModelId::kNmrSpinHalf, sched.reversed(), jump_set(ModelId::kNmrSpinHalf, 0.01),
                                  0.01);
  const std::vector<LoopSpec> both{a, b};
  const auto whole = integrate_nojump(both, nmr_plus());
  const auto first = integrate_nojump(a, nmr_plus());
  const auto split = continue_nojump(b, first);
  CHECK((whole.raw_final.amplitudes() - split.raw_final.amplitudes()).norm() == 0.0);
  CHECK(whole.survival == split.survival);
}

TEST_CASE("master equation: amplitude damping and conservation") {
  const double kappa = 0.3, duration = 4.0;
  const BasisPtr& b = model_basis(ModelId::kNmrSpinHalf);
  const auto spec = LoopSpec::custom(
      b, duration, [](double, CMatrix& m) { m.setZero(2, 2); }, jump_set(ModelId::kNmrSpinHalf, kappa), 0.01);
  const QOperator rho0 = QOperator::projector(b, "up");
  const QOperator rho = integrate_master(spec, rho0);
  CHECK(std::abs(rho.entry("up", "up").real() - std::exp(-kappa * duration)) < 1e-10);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);

  const auto loop = nmr_stage(0.02, 1.0, 0.25);
  const QOperator rho_loop = integrate_master(loop, QOperator::outer(nmr_plus(), nmr_plus()));
  CHECK(std::abs(rho_loop.trace() - 1.0) < 1e-8);
  CHECK(rho_loop.hermiticity_defect() < 1e-10);
  CHECK(min_eigenvalue(rho_loop.matrix()) > -1e-8);

  CHECK_THROWS_AS(integrate_master(spec, QOperator::identity(b)), ValidationError);
}

TEST_CASE("unitary limit: engines agree") {
  const auto spec = nmr_stage(0.0, 0.9, 0.25);
  const QState psi = nmr_plus();
  const auto nj = integrate_nojump(spec, psi);
  const QOperator rho = integrate_master(spec, QOperator::outer(psi, psi));
  const CMatrix pure = nj.raw_final.amplitudes() * nj.raw_final.amplitudes().adjoint();
  CHECK(trace_distance(rho.matrix(), pure) < 1e-8);

  const auto tr = sample_trajectory(spec, psi, 11);
  CHECK(tr.events.empty());
  CHECK((tr.final_state.amplitudes() - nj.normalized_final.amplitudes()).norm() < 1e-12);

  const auto avg = average_trajectories(spec, psi, 1, 11);
  CHECK(trace_distance(avg.mean.matrix(), pure) < 1e-8);
}

TEST_CASE("zero-jump trajectories match the no-jump branch") {
  const auto spec = nmr_stage(0.002, 0.9, 0.25);
  const auto nj = integrate_nojump(spec, nmr_plus());
  int checked = 0;
  for (std::uint64_t s = 1; s < 40 && checked < 3; ++s) {
    const auto tr = sample_trajectory(spec, nmr_plus(), s);
    if (!tr.events.empty()) continue;
    ++checked;
    CHECK((tr.final_state.amplitudes() - nj.normalized_final.amplitudes()).norm() < 1e-9);
    CHECK(tr.weight == doctest::Approx(nj.survival).epsilon(1e-12));
  }
  CHECK(checked > 0);
}

TEST_CASE("trajectories are deterministic and events ordered") {
  const auto spec = uniform_decay(0.5, 8.0, 0.01);
  const QState psi = QState::basis_state(pair_basis(), "a");
  const auto a = sample_trajectory(spec, psi, 99);
  const auto b = sample_trajectory(spec, psi, 99);
  REQUIRE(a.events.size() == b.events.size());
  for (size_t i = 0; i < a.events.size(); ++i) CHECK(a.events[i].time == b.events[i].time);
  for (size_t i = 1; i < a.events.size(); ++i) CHECK(a.events[i].time > a.events[i - 1].time);
  CHECK(a.weight >= 0.0);
  CHECK(a.weight <= 1.0);
}

TEST_CASE("parallel and serial ensembles are bitwise identical") {
  const auto spec = nmr_stage(0.05, 1.0, 0.0, 0.02);
  const auto serial = average_trajectories(spec, nmr_plus(), 24, 5, 1);
  const auto parallel = average_trajectories(spec, nmr_plus(), 24, 5, 4);
  CHECK((serial.mean.matrix() - parallel.mean.matrix()).norm() == 0.0);
  CHECK(serial.stderr_frobenius == parallel.stderr_frobenius);
  CHECK(serial.count == 24);
}

TEST_CASE("fourth-order convergence") {
  const QState psi = nmr_plus();
  auto run = [&](double dt) { return integrate_nojump(nmr_stage(0.01, 1.0, 0.25, dt), psi).raw_final.amplitudes(); };
  const CVector a = run(0.02), b = run(0.01), c = run(0.005);
  const double order = std::log2((a - b).norm() / (b - c).norm());
  CHECK(order > 3.4);
  CHECK(order < 4.6);
}
