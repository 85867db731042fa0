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

#include "holo/models.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace holo {
namespace {

constexpr double kPi = std::numbers::pi;

// Fixed level orderings; the integrators index these directly.
constexpr int kG1 = 0, kG2 = 1, kG3 = 2;
constexpr int kOpticalE = 3;   // Lambda / tripod
constexpr int kG4 = 3, kSuperE = 4;

const BasisPtr& nmr_basis() {
  static const BasisPtr b = make_basis({"up", "down"});
  return b;
}

const BasisPtr& optical_basis() {
  static const BasisPtr b = make_basis({"g1", "g2", "g3", "e", "sink"});
  return b;
}

const BasisPtr& superposed_basis() {
  static const BasisPtr b = make_basis({"g1", "g2", "g3", "g4", "e", "sink"});
  return b;
}

// Adds c |g><e| + conj(c) |e><g|.
void couple(CMatrix& m, int g, int e, Complex c) {
  m(g, e) += c;
  m(e, g) += std::conj(c);
}

std::string normalize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char ch : name) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return out;
}

}  // namespace

std::string_view to_string(ModelId model) {
  switch (model) {
    case ModelId::kNmrSpinHalf: return "nmr_spin_half";
    case ModelId::kLambdaFirst: return "lambda_first";
    case ModelId::kLambdaRefocus: return "lambda_refocus";
    case ModelId::kTripodFirst: return "tripod_first";
    case ModelId::kTripodNaiveRefocus: return "tripod_naive_refocus";
    case ModelId::kSuperposedDual: return "superposed_dual";
  }
  return "unknown";
}

ModelId parse_model(std::string_view name) {
  const std::string n = normalize_name(name);
  for (ModelId m : {ModelId::kNmrSpinHalf, ModelId::kLambdaFirst, ModelId::kLambdaRefocus, ModelId::kTripodFirst,
                    ModelId::kTripodNaiveRefocus, ModelId::kSuperposedDual}) {
    if (n == to_string(m)) return m;
  }
  throw ValidationError("model", "unknown model '" + std::string(name) + "'");
}

const BasisPtr& model_basis(ModelId model) {
  switch (model) {
    case ModelId::kNmrSpinHalf: return nmr_basis();
    case ModelId::kSuperposedDual: return superposed_basis();
    default: return optical_basis();
  }
}

std::array<std::string, 2> computational_labels(ModelId model) {
  if (model == ModelId::kNmrSpinHalf) return {"down", "up"};
  return {"g1", "g2"};
}

std::vector<std::string> spectator_labels(ModelId model) {
  switch (model) {
    case ModelId::kLambdaFirst: return {"g1"};
    case ModelId::kLambdaRefocus: return {"g2"};
    default: return {};
  }
}

bool is_abelian(ModelId model) {
  return model == ModelId::kNmrSpinHalf || model == ModelId::kLambdaFirst || model == ModelId::kLambdaRefocus;
}

// ---------------------------------------------------------------------------

void model_matrix(ModelId model, double omega, double theta, double phi, CMatrix& out) {
  const double st = std::sin(theta), ct = std::cos(theta);
  switch (model) {
    case ModelId::kNmrSpinHalf: {
      // (omega/2)(cos(theta) sz + sin(theta)(cos(phase) sx + sin(phase) sy))
      out.setZero(2, 2);
      const double half = 0.5 * omega;
      out(0, 0) = half * ct;
      out(1, 1) = -half * ct;
      out(0, 1) = half * st * Complex(std::cos(phi), -std::sin(phi));
      out(1, 0) = std::conj(out(0, 1));
      return;
    }
    case ModelId::kLambdaFirst:
    case ModelId::kLambdaRefocus: {
      out.setZero(5, 5);
      const int bright = model == ModelId::kLambdaFirst ? kG2 : kG1;
      couple(out, bright, kOpticalE, omega * st);
      couple(out, kG3, kOpticalE, omega * ct * std::polar(1.0, phi));
      return;
    }
    case ModelId::kTripodFirst:
    case ModelId::kTripodNaiveRefocus: {
      out.setZero(5, 5);
      const bool first = model == ModelId::kTripodFirst;
      const int cos_level = first ? kG1 : kG2;
      const int sin_level = first ? kG2 : kG1;
      couple(out, cos_level, kOpticalE, omega * st * std::cos(phi));
      couple(out, sin_level, kOpticalE, omega * st * std::sin(phi));
      couple(out, kG3, kOpticalE, omega * ct);
      return;
    }
    case ModelId::kSuperposedDual: {
      out.setZero(6, 6);
      const double cp = std::cos(phi), sp = std::sin(phi);
      couple(out, kG1, kSuperE, omega * st * (cp - sp));
      couple(out, kG2, kSuperE, omega * st * (sp + cp));
      couple(out, kG3, kSuperE, omega * ct);
      couple(out, kG4, kSuperE, omega * ct);
      return;
    }
  }
}

QOperator model_hamiltonian(ModelId model, double omega, double theta, double phi) {
  CMatrix m;
  model_matrix(model, omega, theta, phi, m);
  return QOperator(model_basis(model), std::move(m));
}

QOperator nmr_hamiltonian(double omega, double theta, double phase) {
  return model_hamiltonian(ModelId::kNmrSpinHalf, omega, theta, phase);
}

QOperator lambda_hamiltonian(LambdaVariant variant, double omega, double theta, double phi) {
  return model_hamiltonian(variant == LambdaVariant::kFirst ? ModelId::kLambdaFirst : ModelId::kLambdaRefocus, omega,
                           theta, phi);
}

QOperator tripod_hamiltonian(TripodVariant variant, double omega, double theta, double phi) {
  return model_hamiltonian(variant == TripodVariant::kFirst ? ModelId::kTripodFirst : ModelId::kTripodNaiveRefocus,
                           omega, theta, phi);
}

QOperator superposed_hamiltonian(double omega, double theta, double phi) {
  return model_hamiltonian(ModelId::kSuperposedDual, omega, theta, phi);
}

// ---------------------------------------------------------------------------

QOperator JumpChannel::op() const { return lowering * Complex(std::sqrt(rate), 0.0); }

QOperator JumpChannel::decay_profile() const { return (adjoint(lowering) * lowering) * Complex(rate, 0.0); }

std::vector<JumpChannel> jump_set(ModelId model, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa", "rate must be finite and >= 0");
  const BasisPtr& b = model_basis(model);
  std::vector<JumpChannel> out;
  switch (model) {
    case ModelId::kNmrSpinHalf:
      out.push_back({kappa, QOperator::transition(b, "down", "up"), std::nullopt});
      break;
    case ModelId::kSuperposedDual:
      out.push_back({kappa, QOperator::transition(b, "sink", "g3"), std::string(labels::kSink)});
      out.push_back({kappa, QOperator::transition(b, "sink", "g4"), std::string(labels::kSink)});
      break;
    default:
      out.push_back({kappa, QOperator::transition(b, "sink", "g3"), std::string(labels::kSink)});
      break;
  }
  return out;
}

QOperator effective_hamiltonian(const QOperator& h, const std::vector<JumpChannel>& channels) {
  CMatrix m = h.matrix();
  for (const auto& ch : channels) {
    if (!same_basis(ch.lowering.basis(), h.basis())) throw DimensionError("effective_hamiltonian: basis mismatch");
    m -= 0.5 * kI * ch.rate * (ch.lowering.matrix().adjoint() * ch.lowering.matrix());
  }
  return QOperator(h.basis(), std::move(m));
}

std::vector<QState> dark_states(ModelId model, double theta, double phi) {
  const BasisPtr& b = model_basis(model);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Complex tilt = -st * std::polar(1.0, phi);
  switch (model) {
    case ModelId::kNmrSpinHalf:
      throw UnsupportedModelError("the spin-1/2 model has no dark states");
    case ModelId::kLambdaFirst:
      return {QState::from_components(b, {{"g2", ct}, {"g3", tilt}})};
    case ModelId::kLambdaRefocus:
      return {QState::from_components(b, {{"g1", ct}, {"g3", tilt}})};
    case ModelId::kTripodFirst:
      return {QState::from_components(b, {{"g1", ct * cp}, {"g2", ct * sp}, {"g3", -st}}),
              QState::from_components(b, {{"g2", cp}, {"g1", -sp}})};
    case ModelId::kTripodNaiveRefocus:
      return {QState::from_components(b, {{"g2", ct * cp}, {"g1", ct * sp}, {"g3", -st}}),
              QState::from_components(b, {{"g1", cp}, {"g2", -sp}})};
    case ModelId::kSuperposedDual:
      return {QState::from_components(b, {{"g1", ct * cp}, {"g2", ct * sp}, {"g3", -st}}),
              QState::from_components(b, {{"g2", ct * cp}, {"g1", -ct * sp}, {"g4", -st}})};
  }
  throw UnsupportedModelError("unknown model");
}

// ---------------------------------------------------------------------------

ParamSchedule::ParamSchedule(double omega, double gamma, double theta0, double ramp_fraction, Direction direction)
    : omega_(omega), gamma_(gamma), theta0_(theta0), ramp_fraction_(ramp_fraction), direction_(direction) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega", "must be finite and > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma", "must be finite and > 0");
  if (!(theta0 >= 0.0) || theta0 > 0.5 * kPi + 1e-12) throw ValidationError("theta0", "must lie in [0, pi/2]");
  if (!(ramp_fraction >= 0.0) || !std::isfinite(ramp_fraction))
    throw ValidationError("ramp_fraction", "must be finite and >= 0");
  loop_ = 2.0 * kPi / gamma;
  ramp_ = ramp_fraction * loop_;
  total_ = loop_ + 2.0 * ramp_;
  if (ramp_ > 0.0) segments_.push_back({SegmentKind::kRampIn, ramp_});
  segments_.push_back({SegmentKind::kLoop, loop_});
  if (ramp_ > 0.0) segments_.push_back({SegmentKind::kRampOut, ramp_});
}

double ParamSchedule::forward_theta(double t) const {
  if (ramp_ > 0.0) {
    if (t < ramp_) {
      const double s = std::sin(0.5 * kPi * t / ramp_);
      return theta0_ * s * s;
    }
    if (t > ramp_ + loop_) {
      const double s = std::sin(0.5 * kPi * (total_ - t) / ramp_);
      return theta0_ * s * s;
    }
  }
  return theta0_;
}

double ParamSchedule::forward_phi(double t) const {
  if (t <= ramp_) return 0.0;
  if (t >= ramp_ + loop_) return 2.0 * kPi;
  return gamma_ * (t - ramp_);
}

double ParamSchedule::theta(double t) const {
  return forward_theta(direction_ == Direction::kForward ? t : total_ - t);
}

double ParamSchedule::phi(double t) const {
  return forward_phi(direction_ == Direction::kForward ? t : total_ - t);
}

std::vector<double> ParamSchedule::breakpoints() const {
  if (ramp_ <= 0.0) return {};
  return {ramp_, ramp_ + loop_};
}

ParamSchedule ParamSchedule::reversed() const {
  return ParamSchedule(omega_, gamma_, theta0_, ramp_fraction_,
                       direction_ == Direction::kForward ? Direction::kReversed : Direction::kForward);
}

ParamSchedule schedule_for_loop(ModelId model, double theta0, double gamma, double omega, Direction direction,
                                double ramp_fraction, const ScheduleOptions& options) {
  (void)model;  // every model shares the loop shape
  if (options.enforce_adiabaticity && omega <= options.min_omega_over_gamma * gamma) {
    throw AdiabaticityError("omega/gamma = " + std::to_string(omega / gamma) + " is below the adiabatic threshold " +
                            std::to_string(options.min_omega_over_gamma));
  }
  return ParamSchedule(omega, gamma, theta0, ramp_fraction, direction);
}

}  // namespace holo
