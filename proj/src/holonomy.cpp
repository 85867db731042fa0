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

#include "holo/holonomy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace holo {
namespace {

constexpr double kPi = std::numbers::pi;

double sigma_ratio_guard(double smin, double smax) { return smax > 0.0 ? smin / smax : 0.0; }

// Instantaneous effective Hamiltonian of a stage.
CMatrix stage_heff(const LoopSpec& spec, double t) {
  const int d = spec.basis->dim();
  CMatrix h = CMatrix::Zero(d, d);
  spec.hamiltonian(t, h);
  for (const JumpChannel& ch : spec.channels) h += (-0.5 * kI) * ch.decay_profile().matrix();
  return h;
}

// Eigenvalues of a 2x2 matrix ordered (+, -) by real part.
std::array<Complex, 2> eig2(const CMatrix& m) {
  const Complex half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const Complex root = std::sqrt(0.25 * (m(0, 0) - m(1, 1)) * (m(0, 0) - m(1, 1)) + m(0, 1) * m(1, 0));
  std::array<Complex, 2> e{half_tr + root, half_tr - root};
  if (e[0].real() < e[1].real()) std::swap(e[0], e[1]);
  return e;
}

// Dark frame: analytic states first, then an orthonormal completion of the
// numerical kernel of H on the coupled levels.
struct Frame {
  CMatrix f;
  int analytic = 0;
};

Frame dark_frame(ModelId model, double omega, double theta, double phi) {
  const BasisPtr& basis = model_basis(model);
  const int d = basis->dim();
  CMatrix h;
  model_matrix(model, omega, theta, phi, h);

  if (model == ModelId::kNmrSpinHalf) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.eigenvalues()(1) - es.eigenvalues()(0) < 1e-9 * omega)
      throw DegeneracyCrossingError("spin-1/2 levels cross along the path");
    return {es.eigenvectors().col(1), 1};
  }

  std::vector<int> active;
  const auto spect = spectator_labels(model);
  for (int i = 0; i < d; ++i) {
    const std::string& l = basis->label(i);
    if (l == labels::kSink) continue;
    bool skip = false;
    for (const auto& s : spect) skip = skip || s == l;
    if (!skip) active.push_back(i);
  }
  const int na = static_cast<int>(active.size());
  CMatrix ha(na, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) ha(i, j) = h(active[i], active[j]);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(ha);
  std::vector<int> kern;
  for (int i = 0; i < na; ++i)
    if (std::abs(es.eigenvalues()(i)) < 1e-8 * omega) kern.push_back(i);
  const int dk = static_cast<int>(kern.size());
  CMatrix k = CMatrix::Zero(d, dk);
  for (int c = 0; c < dk; ++c)
    for (int i = 0; i < na; ++i) k(active[i], c) = es.eigenvectors()(i, kern[c]);

  const auto dark = dark_states(model, theta, phi);
  const int da = static_cast<int>(dark.size());
  if (dk < da) throw DegeneracyCrossingError("dark subspace smaller than the analytic dark-state set");
  CMatrix f(d, dk);
  for (int c = 0; c < da; ++c) f.col(c) = dark[static_cast<std::size_t>(c)].amplitudes();
  if (dk > da) {
    const CMatrix a = f.leftCols(da);
    const CMatrix q = k - a * (a.adjoint() * k);
    Eigen::JacobiSVD<CMatrix> svd(q, Eigen::ComputeThinU);
    f.rightCols(dk - da) = svd.matrixU().leftCols(dk - da);
  }
  return {f, da};
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (b <= a) return 0.0;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

PhaseReport make_phase_report(Complex dynamical, Complex geometric, std::string convention) {
  return {dynamical, geometric, dynamical + geometric, std::move(convention), std::nullopt, std::nullopt};
}

void normalize_gate(GateReport& r, bool abelian) {
  const auto sv = singular_values(r.gate);
  r.homogeneity = sv[0] * sv[0] - sv[1] * sv[1];
  if (!(sv[0] > 0.0)) throw NumericalInstabilityError("gate vanished; no survivors to normalize");
  Complex phase(1.0, 0.0);
  if (abelian && std::abs(r.gate(0, 0)) > 1e-12 * sv[0]) {
    phase = r.gate(0, 0) / std::abs(r.gate(0, 0));
  } else {
    // Strip the U(1) part: W / phase lies in SU(2). Of the two roots take the
    // one keeping Re tr(W / phase) >= 0.
    const Mat2 w = polar_unitary(r.gate);
    phase = std::sqrt(w.determinant());
    phase /= std::abs(phase);
    if ((w.trace() / phase).real() < 0.0) phase = -phase;
  }
  r.global_factor = sv[0] * phase;
  r.normalized_gate = r.gate / r.global_factor;
}

GateReport extract_gate(ModelId model, const ColumnRunner& run, double leakage_limit) {
  const BasisPtr& basis = model_basis(model);
  const auto comp = computational_labels(model);
  const int sink = basis->contains(labels::kSink) ? basis->index(labels::kSink) : -1;
  GateReport r;
  for (int j = 0; j < 2; ++j) {
    const NoJumpResult res = run(QState::basis_state(basis, comp[static_cast<std::size_t>(j)]));
    if (!same_basis(res.raw_final.basis(), basis)) throw DimensionError("runner returned a state on a foreign basis");
    const CVector& v = res.raw_final.amplitudes();
    const int c0 = basis->index(comp[0]), c1 = basis->index(comp[1]);
    r.gate(0, j) = v[c0];
    r.gate(1, j) = v[c1];
    r.column_survival[static_cast<std::size_t>(j)] = res.survival;
    double outside = 0.0;
    for (int i = 0; i < v.size(); ++i)
      if (i != c0 && i != c1 && i != sink) outside += std::norm(v[i]);
    if (res.survival > 0.0) r.leakage = std::max(r.leakage, outside / res.survival);
    r.tracked_phases[static_cast<std::size_t>(j)] = res.tracked_phase;
  }
  r.survival = 0.5 * (r.column_survival[0] + r.column_survival[1]);
  if (r.leakage > leakage_limit)
    throw AdiabaticityError("leakage out of the computational subspace is " + std::to_string(r.leakage) +
                            " (> " + std::to_string(leakage_limit) + "); the loop is not adiabatic");
  normalize_gate(r, is_abelian(model));
  return r;
}

HolonomyMatrix wilson_holonomy(ModelId model, const ParamSchedule& schedule, int steps) {
  if (steps < 100) throw ValidationError("wilson_steps", "at least 100 path steps are required");
  const double T = schedule.duration();
  const double omega = schedule.omega();
  auto frame_at = [&](int k) {
    const double t = T * static_cast<double>(k) / steps;
    return dark_frame(model, omega, schedule.theta(t), schedule.phi(t));
  };
  const Frame f0 = frame_at(0);
  const int dk = static_cast<int>(f0.f.cols());
  CMatrix u = CMatrix::Identity(dk, dk);
  Frame prev = f0;
  for (int k = 1; k <= steps; ++k) {
    Frame next = frame_at(k);
    if (next.f.cols() != dk)
      throw DegeneracyCrossingError("dark-subspace dimension changes along the path (step " + std::to_string(k) + ")");
    const CMatrix overlap = next.f.adjoint() * prev.f;
    u = (polar_unitary(overlap) * u).eval();
    prev = std::move(next);
  }
  u = (polar_unitary(CMatrix(f0.f.adjoint() * prev.f)) * u).eval();

  HolonomyMatrix h;
  h.dim = f0.analytic;
  h.matrix = u.topLeftCorner(h.dim, h.dim);
  h.path_steps = steps;
  h.transported_dim = dk;
  h.unitarity_defect = (h.matrix.adjoint() * h.matrix - CMatrix::Identity(h.dim, h.dim)).norm();
  return h;
}

double rotation_angle(const Mat2& u) {
  return std::atan2(0.5 * (u(0, 1) - u(1, 0)).real(), 0.5 * (u(0, 0) + u(1, 1)).real());
}

double holonomy_angle(const HolonomyMatrix& h) {
  if (h.dim == 1) return std::arg(h.matrix(0, 0));
  if (h.dim == 2) return rotation_angle(Mat2(h.matrix));
  throw DimensionError("holonomy angle needs a 1x1 or 2x2 matrix");
}

Complex omega_bar(double omega, double kappa, double theta) {
  const double s = std::sin(theta);
  const Complex c = std::cos(theta) - kI * (kappa / (2.0 * omega));
  return omega * std::sqrt(s * s + c * c);
}

Complex complex_dynamical_phase(double omega, double kappa, double theta, double T, int branch) {
  const double sgn = branch >= 0 ? 1.0 : -1.0;
  return sgn * 0.5 * omega_bar(omega, kappa, theta) * T - kI * (kappa * T / 4.0);
}

Complex complex_berry_phase(double omega, double kappa, double theta, int branch) {
  const double sgn = branch >= 0 ? 1.0 : -1.0;
  const Complex c = std::cos(theta) - kI * (kappa / (2.0 * omega));
  return sgn * kPi * (1.0 - omega / omega_bar(omega, kappa, theta) * c);
}

PhaseReport analytic_phases(ModelId model, double theta0, double kappa, double gamma) {
  const double s2 = std::sin(theta0) * std::sin(theta0);
  double phi_g = 0.0;
  switch (model) {
    case ModelId::kLambdaFirst: phi_g = 4.0 * kPi * s2; break;
    case ModelId::kTripodFirst:
    case ModelId::kSuperposedDual: phi_g = 2.0 * kPi * std::cos(theta0); break;
    default: throw UnsupportedModelError("no closed-form phases for model " + std::string(to_string(model)));
  }
  if (!(gamma > 0.0)) throw ValidationError("gamma", "must be > 0");
  const double phi_d = -kPi * (kappa / gamma) * s2;
  // Amplitude factor exp(phi_d + i phi_g) written as exp(-i p).
  PhaseReport r = make_phase_report(Complex(0.0, phi_d), Complex(-phi_g, 0.0),
                                    "reference_closed_form: amplitude factor exp(-i p)");
  r.reference_phi_g = phi_g;
  r.reference_phi_d = phi_d;
  return r;
}

DistortionMetrics gate_distortion(const GateReport& report, const Mat2& ideal) {
  const auto sv = singular_values(report.gate);
  DistortionMetrics m;
  if (!(sv[0] > 0.0)) throw NumericalInstabilityError("gate vanished");
  m.unitarity_defect = (report.gate.adjoint() * report.gate / (sv[0] * sv[0]) - Mat2::Identity()).norm();
  m.fidelity = std::abs((ideal.adjoint() * report.normalized_gate).trace()) / 2.0;
  m.homogeneity_defect = 1.0 - sigma_ratio_guard(sv[1], sv[0]);
  m.log_anisotropy = sv[1] > 0.0 ? std::log(sv[0] / sv[1]) : std::numeric_limits<double>::infinity();
  return m;
}

CyclicPhases measure_cyclic_phases(const LoopSpec& spec, int segments) {
  if (spec.basis->dim() != 2) throw DimensionError("cyclic phases need a two-level stage");
  if (!spec.schedule) throw ValidationError("schedule", "cyclic phases need a parameter schedule");
  if (segments < 1) throw ValidationError("segments", "must be >= 1");
  const ParamSchedule& sch = *spec.schedule;
  const double T = spec.duration;

  // Monodromy as a product of window propagators; det from the product of
  // window dets so the strongly damped branch keeps full relative accuracy.
  CMatrix m = CMatrix::Identity(2, 2);
  Complex det{1.0, 0.0};
  for (int k = 0; k < segments; ++k) {
    const double a = T * k / segments;
    const double b = (k + 1 == segments) ? T : T * (k + 1) / segments;
    const CMatrix p = nojump_propagator(spec, a, b);
    det *= p.determinant();
    m = (p * m).eval();
  }
  const Complex tr = m(0, 0) + m(1, 1);
  Complex root = std::sqrt(tr * tr - 4.0 * det);
  if ((std::conj(tr) * root).real() < 0.0) root = -root;
  const Complex big = 0.5 * (tr + root);
  const Complex small = det / big;

  CVector vdom(2);
  const CVector c1 = (CVector(2) << big - m(1, 1), m(1, 0)).finished();
  const CVector c2 = (CVector(2) << m(0, 1), big - m(0, 0)).finished();
  vdom = c1.norm() >= c2.norm() ? c1 : c2;
  vdom.normalize();

  Eigen::ComplexEigenSolver<CMatrix> es(stage_heff(spec, 0.0));
  int plus_idx = es.eigenvalues()(0).real() >= es.eigenvalues()(1).real() ? 0 : 1;
  const CVector vp = es.eigenvectors().col(plus_idx).normalized();
  const CVector vm = es.eigenvectors().col(1 - plus_idx).normalized();
  const bool dominant_is_plus = std::abs(vp.dot(vdom)) >= std::abs(vm.dot(vdom));
  const Complex lam_plus = dominant_is_plus ? big : small;
  const Complex lam_minus = dominant_is_plus ? small : big;

  // Instantaneous complex eigenvalues, integrated per schedule segment.
  auto eig_at = [&](double t) { return eig2(stage_heff(spec, t)); };
  std::array<Complex, 2> integral{};
  double t0 = 0.0;
  for (const Segment& seg : sch.segments()) {
    for (int b = 0; b < 2; ++b) {
      const double re = simpson([&](double t) { return eig_at(t)[static_cast<std::size_t>(b)].real(); }, t0,
                                t0 + seg.duration, 4000);
      const double im = simpson([&](double t) { return eig_at(t)[static_cast<std::size_t>(b)].imag(); }, t0,
                                t0 + seg.duration, 4000);
      integral[static_cast<std::size_t>(b)] += Complex(re, im);
    }
    t0 += seg.duration;
  }

  auto measured = [&](Complex lam, double base) {
    // lam = exp(-i p)
    const double re = base + wrap_phase(-std::arg(lam) - base);
    return Complex(re, std::log(std::abs(lam)));
  };

  double kappa = 0.0;
  for (const JumpChannel& ch : spec.channels) kappa += ch.rate;
  const double omega = sch.omega(), theta = sch.theta0();

  CyclicPhases out;
  out.plus = measured(lam_plus, integral[0].real());
  out.minus = measured(lam_minus, integral[1].real());
  // Closed forms on the plateau; ramps contribute their integrated eigenvalues.
  double plateau = 0.0;
  std::array<Complex, 2> ramp = integral;
  t0 = 0.0;
  for (const Segment& seg : sch.segments()) {
    if (seg.kind == SegmentKind::kLoop) {
      plateau = seg.duration;
      for (int b = 0; b < 2; ++b) {
        ramp[static_cast<std::size_t>(b)] -=
            Complex(simpson([&](double t) { return eig_at(t)[static_cast<std::size_t>(b)].real(); }, t0,
                            t0 + seg.duration, 4000),
                    simpson([&](double t) { return eig_at(t)[static_cast<std::size_t>(b)].imag(); }, t0,
                            t0 + seg.duration, 4000));
      }
    }
    t0 += seg.duration;
  }
  out.target_plus = complex_dynamical_phase(omega, kappa, theta, plateau, +1) +
                    complex_berry_phase(omega, kappa, theta, +1) + ramp[0];
  out.target_minus = complex_dynamical_phase(omega, kappa, theta, plateau, -1) +
                     complex_berry_phase(omega, kappa, theta, -1) + ramp[1];
  return out;
}

}  // namespace holo
