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

#include "holo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>

#include "holo/rng.hpp"

namespace holo {
namespace {

struct PlanItem {
  bool is_pulse;
  double t;
  double h;
  int pulse;
};

// Nodes: window ends, breakpoints and pulse times; each interval gets
// ceil(length/dt) equal steps. Pulses sitting on the window start are only
// applied when the window starts at 0, so adjacent windows never repeat one.
std::vector<PlanItem> build_plan(const LoopSpec& s, double t0, double t1) {
  std::vector<double> nodes{t0, t1};
  for (double b : s.breakpoints)
    if (b > t0 && b < t1) nodes.push_back(b);
  for (const Pulse& p : s.pulses)
    if (p.time > t0 && p.time < t1) nodes.push_back(p.time);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<PlanItem> plan;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double node = nodes[i];
    if (i > 0 || node == 0.0) {
      for (std::size_t k = 0; k < s.pulses.size(); ++k)
        if (s.pulses[k].time == node) plan.push_back({true, node, 0.0, static_cast<int>(k)});
    }
    if (i + 1 == nodes.size()) break;
    const double len = nodes[i + 1] - node;
    const long n = std::max(1L, static_cast<long>(std::ceil(len / s.dt - 1e-9)));
    const double h = len / static_cast<double>(n);
    for (long k = 0; k < n; ++k) plan.push_back({false, node + static_cast<double>(k) * h, h, -1});
  }
  return plan;
}

class Stepper {
 public:
  explicit Stepper(const LoopSpec& s) : spec_(s), dim_(s.basis->dim()) {
    damping_ = CMatrix::Zero(dim_, dim_);
    for (const JumpChannel& ch : s.channels) damping_ += (-0.5 * kI) * ch.decay_profile().matrix();
    for (const JumpChannel& ch : s.channels) jumps_.push_back(ch.op().matrix());
  }

  void heff(double t, CMatrix& out) const {
    out.setZero(dim_, dim_);
    spec_.hamiltonian(t, out);
    out += damping_;
  }

  // Linear RK4 update psi -> R psi for one step of size h starting at t.
  const CMatrix& step_matrix(double t, double h) {
    heff(t, a_);
    heff(t + 0.5 * h, m_);
    heff(t + h, e_);
    a_ *= -kI;
    m_ *= -kI;
    e_ *= -kI;
    k2_.noalias() = m_ * a_;
    k2_ = m_ + (0.5 * h) * k2_;
    k3_.noalias() = m_ * k2_;
    k3_ = m_ + (0.5 * h) * k3_;
    k4_.noalias() = e_ * k3_;
    k4_ = e_ + h * k4_;
    r_ = a_ + 2.0 * k2_ + 2.0 * k3_ + k4_;
    r_ *= h / 6.0;
    r_ += CMatrix::Identity(dim_, dim_);
    return r_;
  }

  // drho/dt for the master equation.
  void lindblad(const CMatrix& hm, const CMatrix& rho, CMatrix& out) const {
    out.noalias() = hm * rho;
    out.noalias() -= rho * hm.adjoint();
    out *= -kI;
    for (const CMatrix& j : jumps_) out.noalias() += j * rho * j.adjoint();
  }

  const std::vector<CMatrix>& jumps() const { return jumps_; }
  int dim() const { return dim_; }

 private:
  const LoopSpec& spec_;
  int dim_;
  CMatrix damping_;
  std::vector<CMatrix> jumps_;
  CMatrix a_, m_, e_, k2_, k3_, k4_, r_;
};

void require_same_basis(const LoopSpec& spec, const BasisPtr& b, const char* what) {
  if (!same_basis(spec.basis, b)) throw DimensionError(std::string(what) + " does not live on the stage basis");
}

void write_csv_header(std::ostream& os, const LevelBasis& basis) {
  os << "t";
  for (const std::string& l : basis.labels()) os << ",re_" << l << ",im_" << l;
  os << ",survival\n";
}

void write_csv_row(std::ostream& os, double t, const CVector& psi) {
  os << t;
  for (int i = 0; i < psi.size(); ++i) os << ',' << psi[i].real() << ',' << psi[i].imag();
  os << ',' << psi.squaredNorm() << '\n';
}

struct NoJumpState {
  CVector psi;
  std::optional<CVector> track;
  double phase = 0.0;
  Complex last_overlap{};
  double clock = 0.0;  // protocol time, for the CSV dump
  long steps = 0;
};

void update_tracking(NoJumpState& st) {
  if (!st.track) return;
  const Complex ov = st.track->dot(st.psi);
  if (!(std::abs(ov) > 1e-300)) throw NumericalInstabilityError("tracked overlap vanished; phase is undefined");
  st.phase += std::arg(ov * std::conj(st.last_overlap));
  st.last_overlap = ov;
}

void run_nojump_window(const LoopSpec& spec, double t0, double t1, NoJumpState& st,
                       const PropagationOptions& opt) {
  Stepper stepper(spec);
  const auto plan = build_plan(spec, t0, t1);
  const int every = std::max(1, opt.csv_every);
  for (const PlanItem& it : plan) {
    if (it.is_pulse) {
      const CMatrix& p = spec.pulses[static_cast<std::size_t>(it.pulse)].op.matrix();
      st.psi = (p * st.psi).eval();
      if (st.track) {
        st.track = (p * *st.track).eval();
        st.last_overlap = st.track->dot(st.psi);
      }
      continue;
    }
    const double before = st.psi.squaredNorm();
    st.psi = (stepper.step_matrix(it.t, it.h) * st.psi).eval();
    const double after = st.psi.squaredNorm();
    if (!std::isfinite(after)) throw NumericalInstabilityError("non-finite amplitude at t = " + std::to_string(it.t));
    if (after > before * (1.0 + 1e-9))
      throw IntegratorViolationError("no-jump norm increased at t = " + std::to_string(it.t));
    update_tracking(st);
    ++st.steps;
    if (opt.csv && st.steps % every == 0) write_csv_row(*opt.csv, st.clock + it.t + it.h - t0, st.psi);
  }
  st.clock += t1 - t0;
}

NoJumpResult finish(const BasisPtr& basis, const NoJumpState& st) {
  const double surv = st.psi.squaredNorm();
  QState raw(basis, st.psi);
  CVector normed = st.psi;
  if (surv > 0.0) normed /= st.psi.norm();
  NoJumpResult r{raw, surv, QState(basis, normed), std::nullopt, std::nullopt};
  if (st.track) {
    r.tracked_phase = st.phase;
    r.tracking_vector = *st.track;
  }
  return r;
}

NoJumpState start_state(const CVector& psi, const PropagationOptions& opt, double phase) {
  NoJumpState st;
  st.psi = psi;
  if (opt.track) {
    if (opt.track->size() != psi.size()) throw DimensionError("tracking vector dimension mismatch");
    st.track = *opt.track;
    st.last_overlap = st.track->dot(psi);
    st.phase = phase;
  }
  return st;
}

void check_unit(const QState& psi0) {
  if (!psi0.is_finite()) throw ValidationError("psi0", "initial state has non-finite amplitudes");
  if (std::abs(psi0.norm_squared() - 1.0) > 1e-9) throw ValidationError("psi0", "initial state must be normalized");
}

}  // namespace

// ---------------------------------------------------------------------------

LoopSpec LoopSpec::for_schedule(ModelId model, const ParamSchedule& schedule, std::vector<JumpChannel> channels,
                                double dt) {
  LoopSpec s;
  s.model = model;
  s.schedule = schedule;
  s.basis = model_basis(model);
  s.duration = schedule.duration();
  s.hamiltonian = [model, schedule](double t, CMatrix& out) {
    model_matrix(model, schedule.omega(), schedule.theta(t), schedule.phi(t), out);
  };
  s.channels = std::move(channels);
  s.dt = dt;
  s.breakpoints = schedule.breakpoints();
  s.max_rate = std::max(schedule.omega(), schedule.gamma());
  return s;
}

LoopSpec LoopSpec::custom(BasisPtr basis, double duration, HamiltonianFn hamiltonian,
                          std::vector<JumpChannel> channels, double dt) {
  LoopSpec s;
  s.basis = std::move(basis);
  s.duration = duration;
  s.hamiltonian = std::move(hamiltonian);
  s.channels = std::move(channels);
  s.dt = dt;
  return s;
}

void LoopSpec::validate() const {
  if (!basis) throw ValidationError("basis", "stage has no basis");
  if (!hamiltonian) throw ValidationError("hamiltonian", "stage has no Hamiltonian");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ValidationError("duration", "must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "step size must be positive");
  if (max_rate > 0.0 && dt > (0.02 / max_rate) * (1.0 + 1e-12))
    throw ValidationError("dt", "step size exceeds 0.02 / max(omega, gamma)");
  for (const Pulse& p : pulses) {
    if (p.time < 0.0 || p.time > duration) throw ValidationError("pulses", "pulse time outside [0, T]");
    if (!same_basis(p.op.basis(), basis)) throw ValidationError("pulses", "pulse acts on a different basis");
  }
  for (const JumpChannel& c : channels) {
    if (c.rate < 0.0) throw ValidationError("kappa", "decay rate must be >= 0");
    if (!same_basis(c.lowering.basis(), basis)) throw ValidationError("channels", "channel acts on a different basis");
  }
}

double default_dt(double omega, double gamma) {
  double inv = 1.0 / omega;
  if (gamma > 0.0) inv = std::min(inv, 1.0 / gamma);
  return 0.01 * inv;
}

NoJumpResult integrate_nojump(const LoopSpec& spec, const QState& psi0, const PropagationOptions& options) {
  return integrate_nojump(std::span<const LoopSpec>(&spec, 1), psi0, options);
}

NoJumpResult integrate_nojump(std::span<const LoopSpec> stages, const QState& psi0,
                              const PropagationOptions& options) {
  if (stages.empty()) throw ValidationError("stages", "protocol has no stages");
  check_unit(psi0);
  for (const LoopSpec& s : stages) {
    s.validate();
    require_same_basis(s, psi0.basis(), "initial state");
  }
  NoJumpState st = start_state(psi0.amplitudes(), options, 0.0);
  if (options.csv) {
    write_csv_header(*options.csv, *psi0.basis());
    write_csv_row(*options.csv, 0.0, st.psi);
  }
  for (const LoopSpec& s : stages) run_nojump_window(s, 0.0, s.duration, st, options);
  return finish(psi0.basis(), st);
}

NoJumpResult continue_nojump(const LoopSpec& spec, const NoJumpResult& previous, const PropagationOptions& options) {
  spec.validate();
  require_same_basis(spec, previous.raw_final.basis(), "previous state");
  PropagationOptions opt = options;
  if (!opt.track && previous.tracking_vector) opt.track = previous.tracking_vector;
  NoJumpState st = start_state(previous.raw_final.amplitudes(), opt, previous.tracked_phase.value_or(0.0));
  run_nojump_window(spec, 0.0, spec.duration, st, opt);
  return finish(spec.basis, st);
}

CMatrix nojump_propagator(const LoopSpec& spec, double t_begin, double t_end) {
  spec.validate();
  if (t_begin < 0.0 || t_end > spec.duration || t_end < t_begin)
    throw ValidationError("window", "propagator window outside [0, T]");
  const int d = spec.basis->dim();
  CMatrix u = CMatrix::Identity(d, d);
  Stepper stepper(spec);
  for (const PlanItem& it : build_plan(spec, t_begin, t_end)) {
    if (it.is_pulse)
      u = (spec.pulses[static_cast<std::size_t>(it.pulse)].op.matrix() * u).eval();
    else
      u = (stepper.step_matrix(it.t, it.h) * u).eval();
  }
  return u;
}

// ---------------------------------------------------------------------------

QOperator integrate_master(const LoopSpec& spec, const QOperator& rho0) {
  return integrate_master(std::span<const LoopSpec>(&spec, 1), rho0);
}

QOperator integrate_master(std::span<const LoopSpec> stages, const QOperator& rho0) {
  if (stages.empty()) throw ValidationError("stages", "protocol has no stages");
  if (!rho0.is_finite() || !rho0.is_hermitian(1e-10)) throw ValidationError("rho0", "density matrix must be Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-9) throw ValidationError("rho0", "density matrix must have unit trace");
  if (min_eigenvalue(rho0.matrix()) < -1e-10) throw ValidationError("rho0", "density matrix must be positive");

  CMatrix rho = rho0.matrix();
  for (const LoopSpec& s : stages) {
    s.validate();
    require_same_basis(s, rho0.basis(), "density matrix");
    Stepper st(s);
    const int d = st.dim();
    CMatrix ha(d, d), hm(d, d), he(d, d), k1, k2, k3, k4, tmp;
    for (const PlanItem& it : build_plan(s, 0.0, s.duration)) {
      if (it.is_pulse) {
        const CMatrix& p = s.pulses[static_cast<std::size_t>(it.pulse)].op.matrix();
        rho = (p * rho * p.adjoint()).eval();
        continue;
      }
      const double h = it.h;
      st.heff(it.t, ha);
      st.heff(it.t + 0.5 * h, hm);
      st.heff(it.t + h, he);
      st.lindblad(ha, rho, k1);
      tmp = rho + (0.5 * h) * k1;
      st.lindblad(hm, tmp, k2);
      tmp = rho + (0.5 * h) * k2;
      st.lindblad(hm, tmp, k3);
      tmp = rho + h * k3;
      st.lindblad(he, tmp, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!rho.allFinite()) throw NumericalInstabilityError("non-finite density matrix at t = " + std::to_string(it.t));
    }
  }
  return QOperator(rho0.basis(), rho);
}

// ---------------------------------------------------------------------------

namespace {

// Step matrices for a whole stage; shared read-only by all trajectories.
struct StagePlan {
  const LoopSpec* spec;
  std::vector<PlanItem> plan;
  std::vector<CMatrix> steps;  // aligned with plan (empty entries for pulses)
  std::vector<CMatrix> jumps;
};

std::vector<StagePlan> prepare(std::span<const LoopSpec> stages, const QState& psi0) {
  if (stages.empty()) throw ValidationError("stages", "protocol has no stages");
  check_unit(psi0);
  std::vector<StagePlan> out;
  for (const LoopSpec& s : stages) {
    s.validate();
    require_same_basis(s, psi0.basis(), "initial state");
    StagePlan sp{&s, build_plan(s, 0.0, s.duration), {}, {}};
    Stepper st(s);
    sp.steps.resize(sp.plan.size());
    for (std::size_t i = 0; i < sp.plan.size(); ++i)
      if (!sp.plan[i].is_pulse) sp.steps[i] = st.step_matrix(sp.plan[i].t, sp.plan[i].h);
    sp.jumps = st.jumps();
    out.push_back(std::move(sp));
  }
  return out;
}

TrajectoryRecord run_trajectory(const std::vector<StagePlan>& plans, const QState& psi0, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  TrajectoryRecord rec{seed, {}, psi0, 1.0};
  CVector psi = psi0.amplitudes();
  double threshold = rng.uniform();
  double offset = 0.0;
  for (std::size_t si = 0; si < plans.size(); ++si) {
    const StagePlan& sp = plans[si];
    const LoopSpec& s = *sp.spec;
    Stepper stepper(s);
    const double tol = 1e-10 * std::max(s.duration, 1e-300);
    for (std::size_t i = 0; i < sp.plan.size(); ++i) {
      const PlanItem& it = sp.plan[i];
      if (it.is_pulse) {
        psi = (s.pulses[static_cast<std::size_t>(it.pulse)].op.matrix() * psi).eval();
        continue;
      }
      CVector trial = sp.steps[i] * psi;
      if (trial.squaredNorm() >= threshold) {
        psi = trial;
        continue;
      }
      // One or more jumps inside this step.
      double start = it.t;
      const double end = it.t + it.h;
      while (true) {
        double lo = 0.0;
        double hi = end - start;
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          const CVector x = stepper.step_matrix(start, mid) * psi;
          if (x.squaredNorm() >= threshold)
            lo = mid;
          else
            hi = mid;
        }
        const CVector x = stepper.step_matrix(start, hi) * psi;
        double total = 0.0;
        std::vector<double> w(sp.jumps.size());
        for (std::size_t k = 0; k < sp.jumps.size(); ++k) {
          w[k] = (sp.jumps[k] * x).squaredNorm();
          total += w[k];
        }
        start += hi;
        if (total > 0.0) {
          double pick = rng.uniform() * total;
          std::size_t ch = 0;
          while (ch + 1 < w.size() && pick >= w[ch]) pick -= w[ch++];
          CVector jumped = sp.jumps[ch] * x;
          psi = jumped / jumped.norm();
          rec.events.push_back({offset + start, static_cast<int>(ch), static_cast<int>(si)});
        } else {
          psi = x;  // threshold crossed by truncation error only
        }
        threshold = rng.uniform();
        if (end - start <= tol) break;
        trial = stepper.step_matrix(start, end - start) * psi;
        if (trial.squaredNorm() >= threshold) {
          psi = trial;
          break;
        }
      }
      if (!psi.allFinite()) throw NumericalInstabilityError("non-finite trajectory state");
    }
    offset += s.duration;
  }
  rec.weight = psi.squaredNorm();
  rec.final_state = QState(psi0.basis(), psi / psi.norm());
  return rec;
}

}  // namespace

TrajectoryRecord sample_trajectory(const LoopSpec& spec, const QState& psi0, std::uint64_t seed) {
  return sample_trajectory(std::span<const LoopSpec>(&spec, 1), psi0, seed);
}

TrajectoryRecord sample_trajectory(std::span<const LoopSpec> stages, const QState& psi0, std::uint64_t seed) {
  return run_trajectory(prepare(stages, psi0), psi0, seed);
}

int worker_count() {
  if (const char* env = std::getenv("HOLONOMY_THREADS")) {
    char* endp = nullptr;
    const long v = std::strtol(env, &endp, 10);
    if (endp != env && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

EnsembleAverage average_trajectories(const LoopSpec& spec, const QState& psi0, int n, std::uint64_t seed,
                                     int threads) {
  return average_trajectories(std::span<const LoopSpec>(&spec, 1), psi0, n, seed, threads);
}

EnsembleAverage average_trajectories(std::span<const LoopSpec> stages, const QState& psi0, int n,
                                     std::uint64_t seed, int threads) {
  if (n < 1) throw ValidationError("trajectories", "need at least one trajectory");
  const auto plans = prepare(stages, psi0);
  const int workers = std::max(1, std::min(threads > 0 ? threads : worker_count(), n));

  std::vector<CVector> finals(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      for (int i = w; i < n; i += workers)
        finals[static_cast<std::size_t>(i)] =
            run_trajectory(plans, psi0, derive_seed(seed, static_cast<std::uint64_t>(i))).final_state.amplitudes();
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Serial reduction in index order keeps the result independent of `workers`.
  const int d = psi0.dim();
  CMatrix sum = CMatrix::Zero(d, d);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(d, d), sq_im = Eigen::MatrixXd::Zero(d, d);
  for (const CVector& v : finals) {
    const CMatrix p = v * v.adjoint();
    sum += p;
    sq_re += p.real().cwiseAbs2();
    sq_im += p.imag().cwiseAbs2();
  }
  const double nn = static_cast<double>(n);
  const CMatrix mean = sum / nn;
  double se2 = 0.0;
  if (n > 1) {
    const Eigen::MatrixXd var_re = (sq_re - nn * mean.real().cwiseAbs2()) / (nn - 1.0);
    const Eigen::MatrixXd var_im = (sq_im - nn * mean.imag().cwiseAbs2()) / (nn - 1.0);
    se2 = (var_re.cwiseMax(0.0).sum() + var_im.cwiseMax(0.0).sum()) / nn;
  }
  return {QOperator(psi0.basis(), mean), std::sqrt(se2), n};
}

}  // namespace holo
