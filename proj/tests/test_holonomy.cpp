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

#include "holo/holonomy.hpp"

using namespace holo;

namespace {

constexpr double kPi = 3.14159265358979323846;

ColumnRunner runner(const LoopSpec& spec) {
  return [&spec](const QState& in) { return integrate_nojump(spec, in); };
}

LoopSpec lambda_spec(double kappa, double gamma, double theta0, double ramp) {
  const auto sched = schedule_for_loop(ModelId::kLambdaFirst, theta0, gamma, 1.0, Direction::kForward, ramp);
  return LoopSpec::for_schedule(ModelId::kLambdaFirst, sched, jump_set(ModelId::kLambdaFirst, kappa),
                                default_dt(1.0, gamma));
}

}  // namespace

TEST_CASE("closed-form complex phases") {
  CHECK(std::abs(complex_dynamical_phase(1.0, 0.0, 0.7, 10.0, +1) - 5.0) < 1e-14);
  CHECK(std::abs(complex_dynamical_phase(1.0, 0.0, 0.7, 10.0, -1) + 5.0) < 1e-14);

  const double k = 0.3, T = 7.0;
  const Complex at_zero = 0.5 * Complex(1.0, -k / 2) * T - kI * k * T / 4.0;
  CHECK(std::abs(complex_dynamical_phase(1.0, k, 0.0, T, +1) - at_zero) < 1e-13);

  const Complex ex = complex_dynamical_phase(1.0, 0.2, kPi / 2, 100.0, +1);
  CHECK(ex.real() == doctest::Approx(49.7494).epsilon(1e-6));
  CHECK(ex.imag() == doctest::Approx(-5.0));

  CHECK(std::abs(complex_berry_phase(1.0, 0.0, kPi / 3, +1) - kPi / 2) < 1e-14);
  CHECK(std::abs(complex_berry_phase(1.0, 0.0, kPi / 3, -1) + kPi / 2) < 1e-14);
  CHECK(std::abs(complex_berry_phase(1.0, 0.0, 0.0, +1)) < 1e-15);
  const Complex b = complex_berry_phase(1.0, 0.2, kPi / 2, +1);
  const Complex expect = kPi * (1.0 + Complex(0.0, 0.1) / std::sqrt(0.99));
  CHECK(std::abs(b - expect) < 1e-12);
  CHECK(std::abs(omega_bar(1.0, 0.2, kPi / 2) - std::sqrt(0.99)) < 1e-14);
}

TEST_CASE("property: branch continuity in kappa") {
  for (double theta : {0.0, 0.4, kPi / 4, 1.2, kPi / 2}) {
    double worst = 0.0;
    const int n = 1000;
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
      const double k0 = i * h, km = k0 + 0.5 * h, k1 = k0 + h;
      for (int br : {+1, -1}) {
        // A branch flip would show up as an O(1) second difference.
        const Complex d2 = complex_dynamical_phase(1.0, k1, theta, 1.0, br) -
                           2.0 * complex_dynamical_phase(1.0, km, theta, 1.0, br) +
                           complex_dynamical_phase(1.0, k0, theta, 1.0, br);
        const Complex g2 = complex_berry_phase(1.0, k1, theta, br) - 2.0 * complex_berry_phase(1.0, km, theta, br) +
                           complex_berry_phase(1.0, k0, theta, br);
        worst = std::max({worst, std::abs(d2), std::abs(g2)});
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("reference closed forms") {
  auto p = analytic_phases(ModelId::kLambdaFirst, kPi / 2, 0.01, 0.01);
  REQUIRE(p.reference_phi_g.has_value());
  CHECK(*p.reference_phi_g == doctest::Approx(4 * kPi));
  CHECK(*p.reference_phi_d == doctest::Approx(-kPi));
  CHECK(p.convention.rfind("reference_closed_form", 0) == 0);
  CHECK(std::abs(p.total - (p.dynamical + p.geometric)) < 1e-15);

  p = analytic_phases(ModelId::kTripodFirst, kPi / 3, 0.0, 0.01);
  CHECK(*p.reference_phi_g == doctest::Approx(kPi));
  CHECK(*p.reference_phi_d == doctest::Approx(0.0));

  p = analytic_phases(ModelId::kLambdaFirst, 0.0, 0.3, 0.01);
  CHECK(*p.reference_phi_g == doctest::Approx(0.0));
  CHECK(*p.reference_phi_d == doctest::Approx(0.0));

  CHECK_THROWS_AS(analytic_phases(ModelId::kNmrSpinHalf, 0.3, 0.0, 0.01), UnsupportedModelError);
}

TEST_CASE("wilson holonomy: constant path and convergence") {
  const auto flat = schedule_for_loop(ModelId::kLambdaFirst, 0.0, 0.01, 1.0, Direction::kForward, 0.0);
  const auto h0 = wilson_holonomy(ModelId::kLambdaFirst, flat, 200);
  CHECK(h0.dim == 1);
  CHECK(std::abs(h0.matrix(0, 0) - 1.0) < 1e-12);

  const auto sched = schedule_for_loop(ModelId::kTripodFirst, kPi / 3, 0.01, 1.0, Direction::kForward, 0.25);
  const auto a = wilson_holonomy(ModelId::kTripodFirst, sched, 4000);
  const auto b = wilson_holonomy(ModelId::kTripodFirst, sched, 8000);
  CHECK(a.dim == 2);
  CHECK(a.unitarity_defect < 1e-10);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 1e-4);
  // exp(i phi sigma_y) has equal diagonals and opposite off-diagonals.
  CHECK(std::abs(a.matrix(0, 0) - a.matrix(1, 1)) < 1e-3);
  CHECK(std::abs(a.matrix(0, 1) + a.matrix(1, 0)) < 1e-3);

  CHECK_THROWS_AS(wilson_holonomy(ModelId::kLambdaFirst, sched, 50), ValidationError);
}

TEST_CASE("trivial loop gives the identity gate") {
  const auto spec = lambda_spec(0.0, 0.02, 0.0, 0.0);
  const auto r = extract_gate(ModelId::kLambdaFirst, runner(spec));
  CHECK((r.gate - Mat2::Identity()).norm() < 1e-12);
  CHECK(r.survival == doctest::Approx(1.0));
  CHECK(r.leakage < 1e-12);
}

TEST_CASE("lambda loop: oracle agreement at kappa = 0") {
  const double gamma = 0.01;
  const auto spec = lambda_spec(0.0, gamma, 0.9, 0.25);
  auto r = extract_gate(ModelId::kLambdaFirst, runner(spec));
  normalize_gate(r, true);
  const auto h = wilson_holonomy(ModelId::kLambdaFirst, *spec.schedule, 20000);
  CHECK(std::abs(r.normalized_gate(1, 1) - h.matrix(0, 0)) < 1e-3);
  CHECK(std::abs(r.normalized_gate(0, 1)) < 1e-3);

  const auto m = gate_distortion(r, r.normalized_gate);
  CHECK(m.fidelity > 0.9999);
  CHECK(m.unitarity_defect < 1e-3);
}

TEST_CASE("lambda loop: damping shrinks the bright column") {
  const double gamma = 0.01, kappa = 0.5 * gamma;
  const auto spec = lambda_spec(kappa, gamma, kPi / 4, 0.25);
  auto r = extract_gate(ModelId::kLambdaFirst, runner(spec));
  normalize_gate(r, true);
  const auto m = gate_distortion(r, r.normalized_gate);

  // phi_d = -1/2 int kappa sin^2(theta) dt.
  const auto& sched = *spec.schedule;
  const int n = 20000;
  const double h = sched.duration() / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = std::sin(sched.theta(k * h));
    acc += ((k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0)) * s * s;
  }
  const double phi_d = -0.5 * kappa * acc * h / 3.0;
  CHECK(m.homogeneity_defect == doctest::Approx(1.0 - std::exp(phi_d)).epsilon(0.02));
  CHECK(r.column_survival[0] == doctest::Approx(1.0));
  CHECK(r.survival < 1.0);
  CHECK(std::abs(r.global_factor) <= 1.0 + 1e-12);
}

TEST_CASE("property: column linearity") {
  const auto spec = lambda_spec(0.005, 0.02, 0.8, 0.25);
  const auto r = extract_gate(ModelId::kLambdaFirst, runner(spec));
  const BasisPtr& basis = model_basis(ModelId::kLambdaFirst);
  const Complex pairs[][2] = {{0.6, Complex(0.0, 0.8)}, {Complex(0.28, -0.96), 0.0}, {0.8, Complex(-0.36, 0.48)}};
  for (const auto& ab : pairs) {
    const QState in = QState::from_components(basis, {{"g1", ab[0]}, {"g2", ab[1]}}).normalized();
    const auto out = integrate_nojump(spec, in);
    Eigen::Vector2cd v(in.amplitude("g1"), in.amplitude("g2"));
    const Eigen::Vector2cd expect = r.gate * v;
    CHECK(std::abs(out.raw_final.amplitude("g1") - expect[0]) < 1e-9);
    CHECK(std::abs(out.raw_final.amplitude("g2") - expect[1]) < 1e-9);
  }
}

TEST_CASE("normalization splits scalar and unitary parts") {
  GateReport r;
  const Complex c = std::polar(0.7, 0.3);
  Mat2 w;
  w << std::cos(0.4), std::sin(0.4), -std::sin(0.4), std::cos(0.4);
  r.gate = c * w;
  normalize_gate(r, false);
  CHECK(std::abs(r.global_factor - c) < 1e-12);
  CHECK((r.normalized_gate - w).norm() < 1e-12);
  CHECK(singular_values(r.normalized_gate)[0] == doctest::Approx(1.0));
  CHECK(rotation_angle(w) == doctest::Approx(0.4));

  GateReport d;
  d.gate << 0.5 * std::polar(1.0, 0.2), 0.0, 0.0, 0.25 * std::polar(1.0, 1.1);
  normalize_gate(d, true);
  CHECK(std::abs(d.global_factor - 0.5 * std::polar(1.0, 0.2)) < 1e-12);
  CHECK(std::abs(d.normalized_gate(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(d.normalized_gate(1, 1) - 0.5 * std::polar(1.0, 0.9)) < 1e-12);
}

TEST_CASE("wrap_phase range") {
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_phase(0.25) == doctest::Approx(0.25));
}

TEST_CASE("cyclic phases match the complex closed forms") {
  const auto sched = schedule_for_loop(ModelId::kNmrSpinHalf, kPi / 3, 0.005, 1.0, Direction::kForward, 0.0);
  const auto spec = LoopSpec::for_schedule(ModelId::kNmrSpinHalf, sched, jump_set(ModelId::kNmrSpinHalf, 0.01), 0.01);
  const auto p = measure_cyclic_phases(spec);
  CHECK(std::abs(wrap_phase(p.plus.real() - p.target_plus.real())) < 0.05);
  CHECK(std::abs(wrap_phase(p.minus.real() - p.target_minus.real())) < 0.05);
  CHECK(std::abs(p.plus.imag() - p.target_plus.imag()) < 0.01);
  CHECK(std::abs(p.minus.imag() - p.target_minus.imag()) < 0.01);
  CHECK(p.plus.imag() < 0.0);
}
