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

#include "holo/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace holo {
namespace {

constexpr double kPi = std::numbers::pi;

struct SchemeName {
  SchemeKind kind;
  std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {SchemeKind::kSingle, "single"},
    {SchemeKind::kNmrDouble, "nmr_double"},
    {SchemeKind::kLambdaDouble, "lambda_double"},
    {SchemeKind::kTripodNaiveDouble, "tripod_naive_double"},
    {SchemeKind::kSuperposed, "superposed"},
};

std::optional<ModelId> fixed_model(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::kSingle: return std::nullopt;
    case SchemeKind::kNmrDouble: return ModelId::kNmrSpinHalf;
    case SchemeKind::kLambdaDouble: return ModelId::kLambdaFirst;
    case SchemeKind::kTripodNaiveDouble: return ModelId::kTripodFirst;
    case SchemeKind::kSuperposed: return ModelId::kSuperposedDual;
  }
  return std::nullopt;
}

ParamSchedule schedule_of(const SchemeSpec& spec, ModelId model, Direction dir) {
  ScheduleOptions opt;
  opt.enforce_adiabaticity = spec.enforce_adiabaticity;
  return schedule_for_loop(model, spec.theta0, spec.gamma, spec.omega, dir, spec.ramp_fraction, opt);
}

GateReport run_columns(ModelId model, std::span<const LoopSpec> stages) {
  return extract_gate(model, [&](const QState& in) {
    PropagationOptions opt;
    opt.track = in.amplitudes();
    return integrate_nojump(stages, in, opt);
  });
}

// Frame change from the analytic dark states at the loop start to the
// computational levels.
Mat2 dark_to_computational(ModelId model, const ParamSchedule& schedule) {
  const auto dark = dark_states(model, schedule.theta(0.0), schedule.phi(0.0));
  const auto comp = computational_labels(model);
  Mat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c(i, j) = dark[static_cast<std::size_t>(j)].amplitude(comp[static_cast<std::size_t>(i)]);
  return c;
}

void finish(SchemeResult& r) { r.metrics = gate_distortion(r.report, r.ideal); }

PhaseReport phases_for(const SchemeSpec& spec, ModelId model, const ParamSchedule& schedule) {
  if (model == ModelId::kNmrSpinHalf) {
    double plateau = 0.0;
    for (const Segment& s : schedule.segments())
      if (s.kind == SegmentKind::kLoop) plateau = s.duration;
    return make_phase_report(complex_dynamical_phase(spec.omega, spec.kappa, spec.theta0, plateau, +1),
                             complex_berry_phase(spec.omega, spec.kappa, spec.theta0, +1),
                             "closed_form_plus_branch: amplitude factor exp(-i p)");
  }
  ModelId ref = model;
  if (model == ModelId::kLambdaRefocus) ref = ModelId::kLambdaFirst;
  if (model == ModelId::kTripodNaiveRefocus) ref = ModelId::kTripodFirst;
  return analytic_phases(ref, spec.theta0, spec.kappa, spec.gamma);
}

}  // namespace

std::string_view to_string(SchemeKind scheme) {
  for (const auto& n : kSchemeNames)
    if (n.kind == scheme) return n.name;
  return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const auto& n : kSchemeNames)
    if (n.name == lower) return n.kind;
  throw ValidationError("scheme", "unknown scheme '" + std::string(name) + "'");
}

void SchemeSpec::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega", "must be finite and > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma", "must be finite and > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa", "must be finite and >= 0");
  if (kappa >= omega) throw ValidationError("kappa", "must stay below omega (weak-damping regime)");
  if (!(theta0 >= 0.0) || theta0 > 0.5 * kPi + 1e-12) throw ValidationError("theta0", "must lie in [0, pi/2]");
  if (!(ramp_fraction >= 0.0) || !std::isfinite(ramp_fraction))
    throw ValidationError("ramp_fraction", "must be finite and >= 0");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be finite and >= 0");
  if (wilson_steps < 100) throw ValidationError("wilson_steps", "must be >= 100");
  if (auto m = fixed_model(scheme); m && *m != model)
    throw ValidationError("model", std::string(to_string(scheme)) + " runs on model " + std::string(to_string(*m)));
  if (scheme == SchemeKind::kSingle && model != ModelId::kNmrSpinHalf && model != ModelId::kLambdaFirst &&
      model != ModelId::kTripodFirst)
    throw ValidationError("model", "single loops run on nmr_spin_half, lambda_first or tripod_first");
}

LoopSpec loop_stage(const SchemeSpec& spec, ModelId model, Direction direction) {
  const ParamSchedule sch = schedule_of(spec, model, direction);
  return LoopSpec::for_schedule(model, sch, jump_set(model, spec.kappa), spec.resolved_dt());
}

std::vector<LoopSpec> protocol_stages(const SchemeSpec& spec) {
  spec.validate();
  switch (spec.scheme) {
    case SchemeKind::kSingle:
      return {loop_stage(spec, spec.model, Direction::kForward)};
    case SchemeKind::kNmrDouble: {
      const ModelId m = ModelId::kNmrSpinHalf;
      const QOperator pulse =
          pauli::on(model_basis(m), spec.pulse_axis == PulseAxis::kX ? pauli::x() : pauli::y());
      LoopSpec a = loop_stage(spec, m, Direction::kForward);
      LoopSpec b = loop_stage(spec, m, Direction::kReversed);
      a.pulses.push_back({a.duration, pulse});
      b.pulses.push_back({b.duration, pulse});
      return {a, b};
    }
    case SchemeKind::kLambdaDouble:
      return {loop_stage(spec, ModelId::kLambdaFirst, Direction::kForward),
              loop_stage(spec, ModelId::kLambdaRefocus, Direction::kReversed)};
    case SchemeKind::kTripodNaiveDouble:
      return {loop_stage(spec, ModelId::kTripodFirst, Direction::kForward),
              loop_stage(spec, ModelId::kTripodNaiveRefocus, Direction::kReversed)};
    case SchemeKind::kSuperposed:
      return {loop_stage(spec, ModelId::kSuperposedDual, Direction::kForward)};
  }
  throw ValidationError("scheme", "unknown scheme");
}

Mat2 oracle_gate(ModelId model, const ParamSchedule& schedule, int steps, double* angle) {
  const HolonomyMatrix h = wilson_holonomy(model, schedule, steps);
  const double a = holonomy_angle(h);
  if (angle) *angle = a;
  Mat2 g = Mat2::Identity();
  switch (model) {
    case ModelId::kNmrSpinHalf:
      // (down, up): relative factor exp(-i Omega T) times the squared eigenstate holonomy.
      g(1, 1) = std::polar(1.0, -schedule.omega() * schedule.duration()) * h.matrix(0, 0) * h.matrix(0, 0);
      return g;
    case ModelId::kLambdaFirst:
      g(1, 1) = h.matrix(0, 0);
      return g;
    case ModelId::kLambdaRefocus:
      g(0, 0) = h.matrix(0, 0);
      return g;
    default: {
      const Mat2 c = dark_to_computational(model, schedule);
      return c * Mat2(h.matrix) * c.adjoint();
    }
  }
}

SchemeResult run_single_loop(const SchemeSpec& spec, ModelId model) {
  SchemeSpec s = spec;
  s.scheme = SchemeKind::kSingle;
  s.model = model;
  s.validate();
  const LoopSpec stage = loop_stage(s, model, Direction::kForward);
  SchemeResult r;
  r.report = run_columns(model, std::span<const LoopSpec>(&stage, 1));
  r.ideal = oracle_gate(model, *stage.schedule, s.wilson_steps, &r.phi_g_oracle);
  if (is_abelian(model)) r.ideal /= r.ideal(0, 0) / std::abs(r.ideal(0, 0));
  r.phases = phases_for(s, model, *stage.schedule);
  r.duration = stage.duration;
  finish(r);
  return r;
}

SchemeResult run_double_loop_nmr(const SchemeSpec& spec) {
  SchemeSpec s = spec;
  s.scheme = SchemeKind::kNmrDouble;
  s.model = ModelId::kNmrSpinHalf;
  const auto stages = protocol_stages(s);
  SchemeResult r;
  r.report = run_columns(s.model, stages);
  const double berry = holonomy_angle(wilson_holonomy(s.model, *stages[0].schedule, s.wilson_steps));
  r.phi_g_oracle = berry;
  r.ideal = Mat2::Identity();
  r.ideal(1, 1) = std::polar(1.0, 4.0 * berry);
  r.phases = phases_for(s, s.model, *stages[0].schedule);
  r.duration = stages[0].duration + stages[1].duration;
  finish(r);
  return r;
}

SchemeResult run_double_loop_lambda(const SchemeSpec& spec) {
  SchemeSpec s = spec;
  s.scheme = SchemeKind::kLambdaDouble;
  s.model = ModelId::kLambdaFirst;
  const auto stages = protocol_stages(s);
  SchemeResult r;
  r.report = run_columns(ModelId::kLambdaFirst, stages);
  const Mat2 g1 = oracle_gate(ModelId::kLambdaFirst, *stages[0].schedule, s.wilson_steps, &r.phi_g_oracle);
  const Mat2 g2 = oracle_gate(ModelId::kLambdaRefocus, *stages[1].schedule, s.wilson_steps);
  r.ideal = g2 * g1;
  r.ideal /= r.ideal(0, 0) / std::abs(r.ideal(0, 0));
  r.phases = phases_for(s, ModelId::kLambdaFirst, *stages[0].schedule);
  r.duration = stages[0].duration + stages[1].duration;
  finish(r);
  return r;
}

SchemeResult run_naive_refocus_tripod(const SchemeSpec& spec) {
  SchemeSpec s = spec;
  s.scheme = SchemeKind::kTripodNaiveDouble;
  s.model = ModelId::kTripodFirst;
  const auto stages = protocol_stages(s);
  SchemeResult r;
  r.report = run_columns(ModelId::kTripodFirst, stages);
  const Mat2 g1 = oracle_gate(ModelId::kTripodFirst, *stages[0].schedule, s.wilson_steps, &r.phi_g_oracle);
  const Mat2 g2 = oracle_gate(ModelId::kTripodNaiveRefocus, *stages[1].schedule, s.wilson_steps);
  r.ideal = g2 * g1;

  // Each loop on its own, for the commutator of the individual gates.
  r.parts.push_back(run_columns(ModelId::kTripodFirst, std::span<const LoopSpec>(&stages[0], 1)));
  r.parts.push_back(run_columns(ModelId::kTripodNaiveRefocus, std::span<const LoopSpec>(&stages[1], 1)));
  const Mat2 n1 = r.parts[0].gate / singular_values(r.parts[0].gate)[0];
  const Mat2 n2 = r.parts[1].gate / singular_values(r.parts[1].gate)[0];
  r.commutator = commutator_norm(n1, n2);
  r.phases = phases_for(s, ModelId::kTripodFirst, *stages[0].schedule);
  r.duration = stages[0].duration + stages[1].duration;
  finish(r);
  return r;
}

SchemeResult run_superposed_loop(const SchemeSpec& spec) {
  SchemeSpec s = spec;
  s.scheme = SchemeKind::kSuperposed;
  s.model = ModelId::kSuperposedDual;
  const auto stages = protocol_stages(s);
  SchemeResult r;
  r.report = run_columns(s.model, stages);
  r.ideal = oracle_gate(s.model, *stages[0].schedule, s.wilson_steps, &r.phi_g_oracle);
  r.phases = phases_for(s, s.model, *stages[0].schedule);
  r.duration = stages[0].duration;
  finish(r);
  return r;
}

SchemeResult run_scheme(const SchemeSpec& spec) {
  switch (spec.scheme) {
    case SchemeKind::kSingle: return run_single_loop(spec, spec.model);
    case SchemeKind::kNmrDouble: return run_double_loop_nmr(spec);
    case SchemeKind::kLambdaDouble: return run_double_loop_lambda(spec);
    case SchemeKind::kTripodNaiveDouble: return run_naive_refocus_tripod(spec);
    case SchemeKind::kSuperposed: return run_superposed_loop(spec);
  }
  throw ValidationError("scheme", "unknown scheme");
}

double tracked_half_difference(const GateReport& report) {
  if (!report.tracked_phases[0] || !report.tracked_phases[1])
    throw ValidationError("tracking", "gate report carries no tracked phases");
  return 0.5 * (*report.tracked_phases[0] - *report.tracked_phases[1]);
}

// ---------------------------------------------------------------------------

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit f;
  const std::size_t n = std::min(x.size(), y.size());
  f.points = static_cast<int>(n);
  if (n < 2) {
    f.slope = f.stderr_slope = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = std::log(x[i]);
    b(static_cast<Eigen::Index>(i)) = std::log(y[i]);
  }
  const Eigen::Vector2d beta = a.colPivHouseholderQr().solve(b);
  f.slope = beta(1);
  if (n > 2) {
    const double s2 = (b - a * beta).squaredNorm() / static_cast<double>(n - 2);
    f.stderr_slope = std::sqrt(s2 * (a.transpose() * a).inverse()(1, 1));
  }
  return f;
}

std::array<SlopeFit, 2> fit_loglog2(const std::vector<double>& x1, const std::vector<double>& x2,
                                    const std::vector<double>& y) {
  std::array<SlopeFit, 2> f;
  const std::size_t n = std::min({x1.size(), x2.size(), y.size()});
  f[0].points = f[1].points = static_cast<int>(n);
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = std::log(x1[i]);
    a(r, 2) = std::log(x2[i]);
    b(r) = std::log(y[i]);
  }
  const Eigen::MatrixXd ata = a.transpose() * a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ata);
  if (n < 3 || lu.rank() < 3) {
    for (auto& s : f) s.slope = s.stderr_slope = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  const Eigen::Vector3d beta = lu.solve(a.transpose() * b);
  const Eigen::MatrixXd cov = ata.inverse();
  const double s2 = n > 3 ? (b - a * beta).squaredNorm() / static_cast<double>(n - 3) : 0.0;
  for (int k = 0; k < 2; ++k) {
    f[static_cast<std::size_t>(k)].slope = beta(k + 1);
    f[static_cast<std::size_t>(k)].stderr_slope = std::sqrt(s2 * cov(k + 1, k + 1));
  }
  return f;
}

SweepResult scaling_sweep(const SchemeSpec& base, const SweepGrid& grid, int threads) {
  if (grid.kappa_over_gamma.empty() || grid.kappa_over_omega.empty())
    throw ValidationError("grid", "sweep grid is empty");
  for (double v : grid.kappa_over_gamma)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("grid.kappa_over_gamma", "values must be > 0");
  for (double v : grid.kappa_over_omega)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("grid.kappa_over_omega", "values must be > 0");

  SweepResult out;
  for (double ko : grid.kappa_over_omega) {
    for (double kg : grid.kappa_over_gamma) {
      SweepRow row;
      row.scheme = base.scheme;
      row.model = base.model;
      row.kappa_over_gamma = kg;
      row.kappa_over_omega = ko;
      row.omega = base.omega;
      row.kappa = ko * base.omega;
      row.gamma = row.kappa / kg;
      row.theta0 = base.theta0;
      row.in_regime = ko <= 0.5 && row.omega / row.gamma >= 10.0;
      out.rows.push_back(row);
    }
  }

  auto run_point = [&](SweepRow& row) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
      SchemeSpec s = base;
      s.kappa = row.kappa;
      s.gamma = row.gamma;
      s.dt = 0.0;
      s.enforce_adiabaticity = false;
      if (row.kappa >= row.omega) throw ValidationError("kappa", "kappa >= omega");
      const SchemeResult r = run_scheme(s);
      s.kappa = 0.0;
      const SchemeResult r0 = run_scheme(s);
      row.survival = r.report.survival;
      row.fidelity = r.metrics.fidelity;
      row.homogeneity_defect = r.metrics.homogeneity_defect;
      row.unitarity_defect = r.metrics.unitarity_defect;
      row.leakage = r.report.leakage;
      row.phi_g_oracle = r.phi_g_oracle;
      row.log_anisotropy = r.metrics.log_anisotropy;
      row.residual = (r.report.normalized_gate - r0.report.normalized_gate).norm();
    } catch (const std::exception& e) {
      row.error = e.what();
      row.survival = row.fidelity = row.homogeneity_defect = row.unitarity_defect = row.leakage = nan;
      row.phi_g_oracle = row.log_anisotropy = row.residual = nan;
    }
  };

  const int n = static_cast<int>(out.rows.size());
  const int workers = std::max(1, std::min(threads > 0 ? threads : worker_count(), n));
  if (workers == 1) {
    for (auto& row : out.rows) run_point(row);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) run_point(out.rows[static_cast<std::size_t>(i)]);
      });
    for (auto& t : pool) t.join();
  }

  for (const char* metric : {"log_anisotropy", "residual"}) {
    std::vector<double> kg, ko, y;
    for (const auto& row : out.rows) {
      const double v = std::string_view(metric) == "log_anisotropy" ? row.log_anisotropy : row.residual;
      if (!row.in_regime || !row.error.empty() || !(v > 0.0) || !std::isfinite(v)) continue;
      kg.push_back(row.kappa_over_gamma);
      ko.push_back(row.kappa_over_omega);
      y.push_back(v);
    }
    const bool vary_g = std::adjacent_find(kg.begin(), kg.end(), std::not_equal_to<>()) != kg.end();
    const bool vary_o = std::adjacent_find(ko.begin(), ko.end(), std::not_equal_to<>()) != ko.end();
    std::array<SlopeFit, 2> fits;
    if (vary_g && vary_o) {
      fits = fit_loglog2(kg, ko, y);
    } else {
      fits[0] = vary_g ? fit_loglog(kg, y) : SlopeFit{};
      fits[1] = vary_o ? fit_loglog(ko, y) : SlopeFit{};
      if (!vary_g) fits[0].slope = fits[0].stderr_slope = std::numeric_limits<double>::quiet_NaN();
      if (!vary_o) fits[1].slope = fits[1].stderr_slope = std::numeric_limits<double>::quiet_NaN();
      fits[0].points = fits[1].points = static_cast<int>(y.size());
    }
    fits[0].metric = fits[1].metric = metric;
    fits[0].axis = "kappa_over_gamma";
    fits[1].axis = "kappa_over_omega";
    out.fits.push_back(fits[0]);
    out.fits.push_back(fits[1]);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "scheme,model,kappa,gamma,omega,theta0,survival,fidelity,homogeneity_defect,unitarity_defect,leakage,"
        "phi_g_oracle\n";
  const auto old = os.precision(17);
  for (const auto& r : sweep.rows) {
    os << to_string(r.scheme) << ',' << to_string(r.model) << ',' << r.kappa << ',' << r.gamma << ',' << r.omega
       << ',' << r.theta0 << ',' << r.survival << ',' << r.fidelity << ',' << r.homogeneity_defect << ','
       << r.unitarity_defect << ',' << r.leakage << ',' << r.phi_g_oracle << '\n';
  }
  os.precision(old);
}

}  // namespace holo
