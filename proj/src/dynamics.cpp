// Copyright 2026 The cavarray Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavarray/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavarray/error.hpp"
#include "cavarray/observables.hpp"

namespace cavarray {

namespace {

/// Per-sublattice Hamiltonian rebuilt in place from the opposite sublattice's
/// mean fields.
class SublatticeGenerator {
 public:
  SublatticeGenerator(const ModelParams& params, FockSpace space)
      : params_(params), space_(space) {
    const int d = space.dim();
    H_ = Operator::Zero(d, d);
    if (params.t_ch != 0.0) {
      const Operator a = annihilation(space);
      const Operator ad = a.adjoint();
      a_ = a;
      adad_a_ = ad * ad * a;
      adad_ = ad * ad;
      ch_ = Operator::Zero(d, d);
    }
    bandwidth_ = params.t_ch != 0.0 ? std::min(2, d - 1) : 1;
  }

  const Operator& build(const MeanFields& other) {
    const int d = space_.dim();
    H_.setZero();
    for (int k = 0; k < d; ++k) {
      double diag = -params_.delta * k + params_.zV * other.n * k;
      if (!params_.hard_core) diag += params_.U * k * (k - 1);
      H_(k, k) = diag;
    }
    const Complex lower = params_.omega - params_.zJ * other.a;
    for (int k = 0; k + 1 < d; ++k) {
      const double s = std::sqrt(double(k + 1));
      H_(k + 1, k) = lower * s;
      H_(k, k + 1) = std::conj(lower) * s;
    }
    if (params_.t_ch != 0.0) {
      ch_.noalias() = other.adag_adag_a * a_;
      ch_.noalias() += other.a * adad_a_;
      ch_.noalias() -= (0.5 * other.a_a) * adad_;
      H_ += params_.t_ch * ch_;
      H_ += params_.t_ch * ch_.adjoint();
    }
    return H_;
  }

  int bandwidth() const { return bandwidth_; }

 private:
  ModelParams params_;
  FockSpace space_;
  Operator H_;
  Operator a_, adad_a_, adad_, ch_;
  int bandwidth_ = 1;
};

class CoupledSystem {
 public:
  CoupledSystem(const ModelParams& params, FockSpace space)
      : kappa_(params.kappa), gen_A_(params, space), gen_B_(params, space) {}

  void rhs(const DensityMatrix& A, const DensityMatrix& B, Eigen::MatrixXcd& dA,
           Eigen::MatrixXcd& dB) {
    const MeanFields fA = single_site_fields(A);
    const MeanFields fB = single_site_fields(B);
    lindblad_rhs_hermitian_into(A, gen_A_.build(fB), kappa_, gen_A_.bandwidth(), scratch_, dA);
    lindblad_rhs_hermitian_into(B, gen_B_.build(fA), kappa_, gen_B_.bandwidth(), scratch_, dB);
  }

 private:
  double kappa_;
  SublatticeGenerator gen_A_;
  SublatticeGenerator gen_B_;
  Eigen::MatrixXcd scratch_;
};

class Rk4Stepper {
 public:
  explicit Rk4Stepper(CoupledSystem& sys) : sys_(sys) {}

  void step(DensityMatrix& A, DensityMatrix& B, double h) {
    sys_.rhs(A, B, k1A_, k1B_);
    tA_ = A + (0.5 * h) * k1A_;
    tB_ = B + (0.5 * h) * k1B_;
    sys_.rhs(tA_, tB_, k2A_, k2B_);
    tA_ = A + (0.5 * h) * k2A_;
    tB_ = B + (0.5 * h) * k2B_;
    sys_.rhs(tA_, tB_, k3A_, k3B_);
    tA_ = A + h * k3A_;
    tB_ = B + h * k3B_;
    sys_.rhs(tA_, tB_, k4A_, k4B_);
    A += (h / 6.0) * (k1A_ + 2.0 * k2A_ + 2.0 * k3A_ + k4A_);
    B += (h / 6.0) * (k1B_ + 2.0 * k2B_ + 2.0 * k3B_ + k4B_);
  }

 private:
  CoupledSystem& sys_;
  Eigen::MatrixXcd k1A_, k2A_, k3A_, k4A_, k1B_, k2B_, k3B_, k4B_, tA_, tB_;
};

StateDiagnostics worst(const StateDiagnostics& x, const StateDiagnostics& y) {
  return {std::max(x.trace_deviation, y.trace_deviation),
          std::max(x.hermiticity_residual, y.hermiticity_residual),
          std::min(x.min_eigenvalue, y.min_eigenvalue)};
}

void check_space(const ModelParams& params, FockSpace space) {
  if (params.hard_core && space.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "hard-core model lives in dimension 2");
  }
  if (params.n_max && *params.n_max + 1 != space.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state dimension does not match n_max + 1");
  }
}

std::string describe(const StateDiagnostics& d) {
  std::ostringstream os;
  os << "trace_deviation=" << d.trace_deviation
     << " hermiticity_residual=" << d.hermiticity_residual
     << " min_eigenvalue=" << d.min_eigenvalue;
  return os.str();
}

}  // namespace

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> mf_rhs(const MeanFieldState& state,
                                                      const ModelParams& params) {
  check_space(params, state.space());
  CoupledSystem sys(params, state.space());
  Eigen::MatrixXcd dA, dB;
  sys.rhs(state.rho_A, state.rho_B, dA, dB);
  return {dA, dB};
}

Trajectory evolve(const MeanFieldState& initial, const ModelParams& params,
                  double t_final, const IntegratorControls& controls) {
  params.validate();
  if (!(t_final > 0.0)) throw Error(ErrorKind::InvalidInput, "t_final must be positive");
  if (!(controls.dt > 0.0) || !(controls.sample_interval > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "dt and sample_interval must be positive");
  }
  if (initial.rho_B.rows() != initial.rho_A.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "sublattice states differ in dimension");
  }
  const FockSpace space = initial.space();
  check_space(params, space);
  const auto valid = [&](const StateDiagnostics& d) {
    return d.trace_deviation <= controls.trace_tol &&
           d.hermiticity_residual <= controls.hermiticity_tol &&
           d.min_eigenvalue >= -controls.positivity_tol;
  };
  {
    const StateDiagnostics d0 = worst(diagnose(initial.rho_A), diagnose(initial.rho_B));
    if (!valid(d0)) {
      throw Error(ErrorKind::InvalidInput, "initial state is not a density matrix: " + describe(d0));
    }
  }

  CoupledSystem sys(params, space);
  Rk4Stepper stepper(sys);
  const int d = space.dim();

  Trajectory traj;
  DensityMatrix A = initial.rho_A;
  DensityMatrix B = initial.rho_B;
  Eigen::MatrixXcd dA, dB;

  auto record = [&](double t, const StateDiagnostics& diag) {
    sys.rhs(A, B, dA, dB);
    const MeanFields fA = single_site_fields(A);
    const MeanFields fB = single_site_fields(B);
    TrajectorySample s;
    s.t = t;
    s.a_A = fA.a;
    s.a_B = fB.a;
    s.n_A = fA.n;
    s.n_B = fB.n;
    s.residual = std::max(dA.norm(), dB.norm());
    s.top_population = std::max(A(d - 1, d - 1).real(), B(d - 1, d - 1).real());
    s.diagnostics = diag;
    if (controls.enforce_truncation && s.top_population > controls.top_population_tol) {
      throw Error(ErrorKind::TruncationRisk,
                  "top Fock level population " + std::to_string(s.top_population) +
                      " exceeds tolerance at n_max = " + std::to_string(d - 1));
    }
    traj.samples.push_back(s);
  };

  const double interval = controls.sample_interval;
  const long n_samples = std::max(1L, std::lround(std::ceil(t_final / interval - 1e-9)));
  int steps_per_sample = std::max(1, int(std::lround(interval / controls.dt)));
  int halvings = 0;

  record(initial.t, worst(diagnose(A), diagnose(B)));
  DensityMatrix saved_A, saved_B;
  for (long k = 1; k <= n_samples;) {
    saved_A = A;
    saved_B = B;
    const double h = interval / steps_per_sample;
    for (int s = 0; s < steps_per_sample; ++s) stepper.step(A, B, h);

    const bool finite = A.allFinite() && B.allFinite();
    const StateDiagnostics diag =
        finite ? worst(diagnose(A), diagnose(B)) : StateDiagnostics{};
    if (!finite || !valid(diag)) {
      A = saved_A;
      B = saved_B;
      if (++halvings > controls.max_halvings) {
        if (!finite) {
          throw Error(ErrorKind::Stiffness,
                      "step size underflow: state diverged at dt = " + std::to_string(h));
        }
        throw Error(ErrorKind::IntegrationFailure,
                    "invariant violation at t = " +
                        std::to_string(initial.t + k * interval) + ": " + describe(diag));
      }
      steps_per_sample *= 2;
      continue;
    }
    record(initial.t + k * interval, diag);
    ++k;
  }

  traj.final_state = MeanFieldState{A, B, initial.t + n_samples * interval};
  traj.dt_used = interval / steps_per_sample;
  return traj;
}

std::string_view to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::Uniform: return "Uniform";
    case PhaseKind::Crystal: return "Crystal";
    case PhaseKind::Oscillating: return "Oscillating";
  }
  return "Unknown";
}

double order_parameter(const MeanFieldState& state) {
  double diff = 0.0;
  for (int k = 0; k < state.rho_A.rows(); ++k) {
    diff += k * (state.rho_A(k, k).real() - state.rho_B(k, k).real());
  }
  return std::abs(diff);
}

namespace {

using Point4 = Eigen::Vector4d;

Point4 coords(const TrajectorySample& s) {
  return {s.a_A.real(), s.a_A.imag(), s.a_B.real(), s.a_B.imag()};
}

/// Cubic Lagrange interpolation of the uniformly sampled window.
class WindowCurve {
 public:
  WindowCurve(const std::vector<Point4>& pts, double t0, double h)
      : pts_(pts), t0_(t0), h_(h) {}

  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + h_ * double(pts_.size() - 1); }

  Point4 at(double t) const {
    const int n = int(pts_.size());
    const double u = (t - t0_) / h_;
    int i = std::clamp(int(std::floor(u)) - 1, 0, n - 4);
    const double x = u - i;  // nodes at 0, 1, 2, 3
    const double w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
    const double w1 = x * (x - 2) * (x - 3) / 2.0;
    const double w2 = -x * (x - 1) * (x - 3) / 2.0;
    const double w3 = x * (x - 1) * (x - 2) / 6.0;
    return w0 * pts_[i] + w1 * pts_[i + 1] + w2 * pts_[i + 2] + w3 * pts_[i + 3];
  }

 private:
  const std::vector<Point4>& pts_;
  double t0_;
  double h_;
};

struct Recurrence {
  bool found = false;
  double period = 0.0;
  double distance = 0.0;
  std::string reason;
};

Recurrence detect_recurrence(const std::vector<Point4>& pts, double t0, double h,
                             const ClassifierControls& controls) {
  Recurrence rec;
  const int m = int(pts.size());
  if (m < 16) {
    rec.reason = "window too short";
    return rec;
  }
  double amplitude = 0.0;
  for (int c = 0; c < 4; ++c) {
    double lo = pts[0][c], hi = pts[0][c];
    for (const auto& p : pts) {
      lo = std::min(lo, p[c]);
      hi = std::max(hi, p[c]);
    }
    amplitude = std::max(amplitude, hi - lo);
  }
  if (amplitude < controls.min_cycle_amplitude) {
    rec.reason = "swing below cycle amplitude floor";
    return rec;
  }

  // Unbiased autocorrelation of Re<a_A>.
  std::vector<double> x(m);
  double mean = 0.0;
  for (int i = 0; i < m; ++i) mean += pts[i][0];
  mean /= m;
  for (int i = 0; i < m; ++i) x[i] = pts[i][0] - mean;
  auto ac = [&](int lag) {
    double acc = 0.0;
    for (int i = 0; i + lag < m; ++i) acc += x[i] * x[i + lag];
    return acc / (m - lag);
  };
  const double ac0 = ac(0);
  if (ac0 <= 0.0) {
    rec.reason = "flat Re<a_A>";
    return rec;
  }
  const int max_lag = (2 * m) / 3;
  int lag = 1;
  while (lag < max_lag && ac(lag) >= 0.0) ++lag;
  if (lag >= max_lag) {
    rec.reason = "no autocorrelation sign change";
    return rec;
  }
  int peak = -1;
  double prev = ac(lag), cur = ac(lag + 1);
  for (int l = lag + 1; l + 1 < max_lag; ++l) {
    const double next = ac(l + 1);
    if (cur > 0.0 && cur >= prev && cur >= next) {
      peak = l;
      break;
    }
    prev = cur;
    cur = next;
  }
  if (peak < 0 || ac(peak) < 0.5 * ac0) {
    rec.reason = "no autocorrelation peak";
    return rec;
  }

  const WindowCurve curve(pts, t0, h);
  const double t_end = curve.t_end();
  auto gap = [&](double period, double t_ref) {
    return (curve.at(t_ref) - curve.at(t_ref - period)).norm();
  };
  // Golden-section refinement of the period around the autocorrelation peak.
  double lo = (peak - 1) * h, hi = (peak + 1) * h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = gap(c, t_end), fd = gap(d, t_end);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = gap(c, t_end);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = gap(d, t_end);
    }
  }
  rec.period = 0.5 * (lo + hi);
  // The return must hold from several phases of the cycle, not only at t_end.
  double worst_gap = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double t_ref = t_end - j * rec.period / 4.0;
    if (t_ref - rec.period < curve.t_begin()) break;
    worst_gap = std::max(worst_gap, gap(rec.period, t_ref));
  }
  rec.distance = worst_gap;
  rec.found = worst_gap < controls.recurrence_tol;
  if (!rec.found) rec.reason = "trajectory does not close after one period";
  return rec;
}

}  // namespace

PhaseLabel classify(const Trajectory& traj, const ClassifierControls& controls) {
  if (traj.samples.size() < 2) {
    throw Error(ErrorKind::Inconclusive, "trajectory has fewer than two samples");
  }
  const double t_first = traj.samples.front().t;
  const double t_last = traj.samples.back().t;
  if (t_last - t_first < controls.t_transient + controls.t_window - 1e-9) {
    throw Error(ErrorKind::Inconclusive,
                "integration too short: need t_transient + t_window");
  }
  const double t_start = t_last - controls.t_window;
  std::vector<Point4> pts;
  double residual = 0.0, dn_sum = 0.0;
  double t0 = 0.0;
  for (const auto& s : traj.samples) {
    if (s.t < t_start - 1e-9) continue;
    if (pts.empty()) t0 = s.t;
    pts.push_back(coords(s));
    residual = std::max(residual, s.residual);
    dn_sum += std::abs(s.n_A - s.n_B);
  }
  PhaseLabel label;
  label.delta_n = dn_sum / double(pts.size());
  label.residual = residual;
  if (residual < controls.eps_stationary) {
    label.kind = label.delta_n < controls.eps_crystal ? PhaseKind::Uniform : PhaseKind::Crystal;
    return label;
  }
  const double h = pts.size() > 1 ? (t_last - t0) / double(pts.size() - 1) : 0.0;
  const Recurrence rec = detect_recurrence(pts, t0, h, controls);
  if (rec.found) {
    label.kind = PhaseKind::Oscillating;
    label.period = rec.period;
    return label;
  }
  std::ostringstream os;
  os << "inconclusive: residual=" << residual << " delta_n=" << label.delta_n
     << " recurrence=" << rec.reason;
  if (rec.period > 0.0) os << " (period=" << rec.period << " gap=" << rec.distance << ")";
  throw Error(ErrorKind::Inconclusive, os.str());
}

DensityMatrix occupation_state(double n, FockSpace space) {
  if (!(n >= 0.0) || n > space.n_max()) {
    throw Error(ErrorKind::InvalidInput,
                "occupation " + std::to_string(n) + " exceeds n_max " +
                    std::to_string(space.n_max()));
  }
  DensityMatrix rho = DensityMatrix::Zero(space.dim(), space.dim());
  const int lo = std::min(int(std::floor(n)), space.n_max());
  const double frac = n - lo;
  rho(lo, lo) = 1.0 - frac;
  if (frac > 0.0) rho(lo + 1, lo + 1) = frac;
  return rho;
}

MeanFieldState seed_state(const Seed& seed, FockSpace space) {
  struct Visitor {
    FockSpace space;
    MeanFieldState operator()(const SymmetricVacuum&) const {
      const DensityMatrix vac = projector(fock_state(0, space));
      return {vac, vac, 0.0};
    }
    MeanFieldState operator()(const AsymmetricCoherent& s) const {
      return {projector(coherent_state(s.alpha_A, space)),
              projector(coherent_state(s.alpha_B, space)), 0.0};
    }
    MeanFieldState operator()(const FockOccupation& s) const {
      return {occupation_state(s.n_A, space), occupation_state(s.n_B, space), 0.0};
    }
  };
  return std::visit(Visitor{space}, seed);
}

namespace {

/// Smallest n_max that can represent the seed at all.
int seed_floor(const Seed& seed) {
  struct Visitor {
    int operator()(const SymmetricVacuum&) const { return 1; }
    int operator()(const AsymmetricCoherent& s) const {
      const double m = std::max(std::norm(s.alpha_A), std::norm(s.alpha_B));
      return int(std::ceil(2.0 * m));
    }
    int operator()(const FockOccupation& s) const {
      return int(std::ceil(std::max(s.n_A, s.n_B)));
    }
  };
  return std::visit(Visitor{}, seed);
}

}  // namespace

PointResult simulate(const ModelParams& params, const Seed& seed, double t_final,
                     IntegratorControls controls, const TruncationPolicy& truncation) {
  params.validate();
  PointResult out;
  if (params.hard_core || params.n_max) {
    ModelParams p = params;
    const int n_max = params.hard_core ? 1 : *params.n_max;
    p.n_max = n_max;
    controls.enforce_truncation = false;
    out.trajectory = evolve(seed_state(seed, FockSpace(n_max + 1)), p, t_final, controls);
    out.n_max_used = n_max;
    return out;
  }
  controls.enforce_truncation = true;
  int n_max = truncation.initial_n_max;
  while (n_max < seed_floor(seed) + truncation.step) n_max += truncation.step;
  for (; n_max <= truncation.max_n_max; n_max += truncation.step) {
    ModelParams p = params;
    p.n_max = n_max;
    try {
      out.trajectory = evolve(seed_state(seed, FockSpace(n_max + 1)), p, t_final, controls);
      out.n_max_used = n_max;
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TruncationRisk) throw;
    }
  }
  throw Error(ErrorKind::TruncationRisk,
              "no truncation up to n_max = " + std::to_string(truncation.max_n_max) +
                  " keeps the top level below tolerance");
}

}  // namespace cavarray
