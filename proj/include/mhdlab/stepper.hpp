#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/rhs.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

struct StepOptions {
  bool dealias = true;
  bool nonlinear = true;
  double cfl_factor = 0.5;  // dt <= cfl_factor * dx / max|u,B|
};

// Integrating-factor RK4: the viscous/diffusive terms are integrated exactly
// by the per-mode multipliers e^{-|k|^2 tau} (velocity) and e^{-delta |k|^2
// tau} (magnetic field); classical RK4 handles the nonlinear remainder.
// With the nonlinearity disabled a step reduces to the exact heat multiplier.
//
// Stage layout, with E1 = e^{lambda dt/2}, E2 = e^{lambda dt}:
//   a = F(v_n)
//   b = F(E1 (v_n + dt/2 a))
//   c = F(E1 v_n + dt/2 b)
//   d = F(E2 v_n + dt E1 c)
//   v_{n+1} = E2 v_n + dt/6 (E2 a + 2 E1 (b + c) + d)
class IfRk4Stepper {
 public:
  IfRk4Stepper(const Grid& g, Fft& fft, StepOptions opts = {})
      : g_(g), ws_(g, fft), opts_(opts) {}

  // Pointwise max over components seen at the start of the last step.
  double last_max_abs() const { return last_max_abs_; }
  double last_max_abs_B() const { return last_max_abs_B_; }

  void step(MHDState& s, double dt) {
    if (!(dt > 0.0)) throw ConfigError("step size must be positive");
    if (!opts_.nonlinear) {
      heat_multiply(s.u, g_, dt);
      heat_multiply(s.B, g_, dt, s.delta);
      s.t += dt;
      return;
    }

    cache_multipliers(dt, s.delta);

    const RhsResult a = eval(s, "a");
    last_max_abs_ = std::max(a.max_abs_u, a.max_abs_B);
    last_max_abs_B_ = a.max_abs_B;
    if (last_max_abs_ > 0.0) {
      const double dt_max = opts_.cfl_factor * g_.dx() / last_max_abs_;
      if (dt > dt_max)
        throw CflError("time step " + std::to_string(dt) +
                           " exceeds admissible " + std::to_string(dt_max) +
                           " at t = " + std::to_string(s.t),
                       s.t);
    }

    MHDState stage;
    stage.delta = s.delta;

    // b stage: E1 (v + dt/2 a)
    stage.t = s.t + 0.5 * dt;
    stage.u = combine(s.u, a.nu, 0.5 * dt, half_u_);
    stage.B = combine(s.B, a.nb, 0.5 * dt, half_B_);
    const RhsResult b = eval(stage, "b");

    // c stage: E1 v + dt/2 b
    stage.u = combine_post(s.u, half_u_, b.nu, 0.5 * dt);
    stage.B = combine_post(s.B, half_B_, b.nb, 0.5 * dt);
    const RhsResult c = eval(stage, "c");

    // d stage: E2 v + dt E1 c
    stage.t = s.t + dt;
    stage.u = combine_d(s.u, full_u_, c.nu, half_u_, dt);
    stage.B = combine_d(s.B, full_B_, c.nb, half_B_, dt);
    const RhsResult d = eval(stage, "d");

    assemble(s.u, a.nu, b.nu, c.nu, d.nu, half_u_, full_u_, dt);
    assemble(s.B, a.nb, b.nb, c.nb, d.nb, half_B_, full_B_, dt);
    s.t += dt;
  }

  RhsWorkspace& workspace() { return ws_; }

 private:
  RhsResult eval(const MHDState& s, const char* stage) {
    RhsResult r = ws_.nonlinear(s, opts_.dealias);
    double probe = 0.0;
    for (const Complex& z : r.nu.data) probe += std::norm(z);
    for (const Complex& z : r.nb.data) probe += std::norm(z);
    if (!std::isfinite(probe))
      throw BlowupError("non-finite RK4 stage " + std::string(stage) +
                            " at t = " + std::to_string(s.t),
                        s.t);
    return r;
  }

  void cache_multipliers(double dt, double delta) {
    if (dt == cached_dt_ && delta == cached_delta_) return;
    const std::size_t n = g_.size();
    half_u_.resize(n);
    full_u_.resize(n);
    half_B_.resize(n);
    full_B_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      half_u_[i] = std::exp(-0.5 * dt * g_.ksq[i]);
      full_u_[i] = half_u_[i] * half_u_[i];
      half_B_[i] = std::exp(-0.5 * dt * delta * g_.ksq[i]);
      full_B_[i] = half_B_[i] * half_B_[i];
    }
    cached_dt_ = dt;
    cached_delta_ = delta;
  }

  // E * (v + w * f)
  SpectralVectorField combine(const SpectralVectorField& v,
                              const SpectralVectorField& f, double w,
                              const std::vector<double>& E) {
    SpectralVectorField out(v.dim, v.npts);
    for (int c = 0; c < v.dim; ++c) {
      auto vo = out.component(c);
      auto vi = v.component(c);
      auto fi = f.component(c);
      for (std::size_t i = 0; i < v.npts; ++i) vo[i] = E[i] * (vi[i] + w * fi[i]);
    }
    return out;
  }

  // E * v + w * f
  SpectralVectorField combine_post(const SpectralVectorField& v,
                                   const std::vector<double>& E,
                                   const SpectralVectorField& f, double w) {
    SpectralVectorField out(v.dim, v.npts);
    for (int c = 0; c < v.dim; ++c) {
      auto vo = out.component(c);
      auto vi = v.component(c);
      auto fi = f.component(c);
      for (std::size_t i = 0; i < v.npts; ++i) vo[i] = E[i] * vi[i] + w * fi[i];
    }
    return out;
  }

  // E2 * v + dt * E1 * f
  SpectralVectorField combine_d(const SpectralVectorField& v,
                                const std::vector<double>& E2,
                                const SpectralVectorField& f,
                                const std::vector<double>& E1, double dt) {
    SpectralVectorField out(v.dim, v.npts);
    for (int c = 0; c < v.dim; ++c) {
      auto vo = out.component(c);
      auto vi = v.component(c);
      auto fi = f.component(c);
      for (std::size_t i = 0; i < v.npts; ++i)
        vo[i] = E2[i] * vi[i] + dt * E1[i] * fi[i];
    }
    return out;
  }

  void assemble(SpectralVectorField& v, const SpectralVectorField& a,
                const SpectralVectorField& b, const SpectralVectorField& c,
                const SpectralVectorField& d, const std::vector<double>& E1,
                const std::vector<double>& E2, double dt) {
    const double w = dt / 6.0;
    for (int comp = 0; comp < v.dim; ++comp) {
      auto vv = v.component(comp);
      auto aa = a.component(comp);
      auto bb = b.component(comp);
      auto cc = c.component(comp);
      auto dd = d.component(comp);
      for (std::size_t i = 0; i < v.npts; ++i)
        vv[i] = E2[i] * vv[i] +
                w * (E2[i] * aa[i] + 2.0 * E1[i] * (bb[i] + cc[i]) + dd[i]);
    }
  }

  const Grid& g_;
  RhsWorkspace ws_;
  StepOptions opts_;
  std::vector<double> half_u_, full_u_, half_B_, full_B_;
  double cached_dt_ = -1.0, cached_delta_ = -1.0;
  double last_max_abs_ = 0.0, last_max_abs_B_ = 0.0;
};

}  // namespace mhdlab
