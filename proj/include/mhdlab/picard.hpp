#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/rhs.hpp"
#include "mhdlab/spectral_ops.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

struct PicardOptions {
  int iterations = 6;
  int nodes = 64;  // trapezoid subintervals on [0, T]
  bool dealias = true;
};

struct PicardResult {
  std::vector<MHDState> trajectory;  // final iterate on the uniform nodes
  std::vector<double> update_norms;  // sup-over-nodes L2 distance per iteration

  const MHDState& at_final_time() const { return trajectory.back(); }
};

// Kato-style iteration for the mild-solution form
//   v_{m+1}(t) = e^{-tA} v_0 + int_0^t e^{-(t-s)A} N(v_m(s)) ds,
// with A the (projected) Laplacian pair and N the nonlinear right-hand side.
// Iterate 0 is the pure heat evolution.  The Duhamel integral is a composite
// trapezoid over uniform nodes with the semigroup applied spectrally; the
// running sums use e^{-(t_q - s_r)A} = (e^{-hA})^{q-r} so one sweep per
// iteration suffices.
inline PicardResult picard_iterate(const SpectralVectorField& u0,
                                   const SpectralVectorField& B0, double delta,
                                   double T, const PicardOptions& opts,
                                   const Grid& g, Fft& fft) {
  if (!(delta > 0.0))
    throw ConfigError("picard iteration requires magnetic diffusion delta > 0");
  if (opts.iterations < 0) throw ConfigError("picard iteration count must be >= 0");
  if (opts.nodes < 1) throw ConfigError("picard needs at least one quadrature node");
  if (!(T > 0.0)) throw ConfigError("picard horizon must be positive");

  const int Q = opts.nodes;
  const double h = T / Q;
  const std::size_t n = g.size();

  SpectralVectorField u_init = leray_projected(u0, g);
  SpectralVectorField B_init = leray_projected(B0, g);
  zero_mean(u_init);
  zero_mean(B_init);

  // heat-semigroup trajectory; also iterate 0
  std::vector<MHDState> base(Q + 1);
  for (int q = 0; q <= Q; ++q) {
    base[q].t = q * h;
    base[q].delta = delta;
    base[q].u = u_init;
    base[q].B = B_init;
    heat_multiply(base[q].u, g, base[q].t);
    heat_multiply(base[q].B, g, base[q].t, delta);
  }

  const double initial_norm =
      std::sqrt(l2_norm_sq(u_init, g) + l2_norm_sq(B_init, g));

  std::vector<double> step_mult_u(n), step_mult_B(n);
  for (std::size_t i = 0; i < n; ++i) {
    step_mult_u[i] = std::exp(-h * g.ksq[i]);
    step_mult_B[i] = std::exp(-h * delta * g.ksq[i]);
  }
  auto apply_mult = [&](SpectralVectorField& f, const std::vector<double>& m) {
    for (int c = 0; c < f.dim; ++c) {
      auto comp = f.component(c);
      for (std::size_t i = 0; i < n; ++i) comp[i] *= m[i];
    }
  };
  auto axpy = [&](SpectralVectorField& y, double a, const SpectralVectorField& x) {
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += a * x.data[i];
  };

  PicardResult res;
  res.trajectory = base;
  RhsWorkspace ws(g, fft);

  for (int m = 0; m < opts.iterations; ++m) {
    std::vector<RhsResult> rhs(Q + 1);
    for (int q = 0; q <= Q; ++q) rhs[q] = ws.nonlinear(res.trajectory[q], opts.dealias);

    std::vector<MHDState> next(Q + 1);
    next[0] = base[0];
    SpectralVectorField run_u(g.dim, n), run_B(g.dim, n);   // sum_{0<r<=q} E^{q-r} f_r
    SpectralVectorField head_u = rhs[0].nu, head_B = rhs[0].nb;  // E^q f_0
    double worst_update = 0.0;
    for (int q = 1; q <= Q; ++q) {
      apply_mult(run_u, step_mult_u);
      apply_mult(run_B, step_mult_B);
      axpy(run_u, 1.0, rhs[q].nu);
      axpy(run_B, 1.0, rhs[q].nb);
      apply_mult(head_u, step_mult_u);
      apply_mult(head_B, step_mult_B);

      next[q].t = q * h;
      next[q].delta = delta;
      next[q].u = base[q].u;
      next[q].B = base[q].B;
      axpy(next[q].u, 0.5 * h, head_u);
      axpy(next[q].u, h, run_u);
      axpy(next[q].u, -0.5 * h, rhs[q].nu);
      axpy(next[q].B, 0.5 * h, head_B);
      axpy(next[q].B, h, run_B);
      axpy(next[q].B, -0.5 * h, rhs[q].nb);

      SpectralVectorField du = next[q].u;
      axpy(du, -1.0, res.trajectory[q].u);
      SpectralVectorField dB = next[q].B;
      axpy(dB, -1.0, res.trajectory[q].B);
      worst_update = std::max(
          worst_update, std::sqrt(l2_norm_sq(du, g) + l2_norm_sq(dB, g)));
    }
    res.trajectory = std::move(next);
    res.update_norms.push_back(worst_update);

    double sup_norm = 0.0;
    for (const auto& s : res.trajectory)
      sup_norm = std::max(
          sup_norm, std::sqrt(l2_norm_sq(s.u, g) + l2_norm_sq(s.B, g)));
    if (sup_norm > 10.0 * initial_norm)
      throw PicardDivergenceError(
          "picard iterate " + std::to_string(m + 1) + " grew to " +
          std::to_string(sup_norm) + " from " + std::to_string(initial_norm));
  }
  return res;
}

}  // namespace mhdlab
