#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "mhdlab/fft.hpp"
#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/spectral_ops.hpp"

namespace mhdlab {

// Continuum vector field evaluated at a physical point; used both for direct
// sampling and for the scaled-data experiments.
using VectorFunction =
    std::function<std::array<double, 3>(const std::array<double, 3>&)>;

inline PhysicalVectorField sample_field(const Grid& g, const VectorFunction& f) {
  PhysicalVectorField out(g.dim, g.size());
  const double h = g.dx();
  const auto N = static_cast<std::size_t>(g.points);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  if (g.dim == 2) {
    std::size_t flat = 0;
    for (std::size_t ix = 0; ix < N; ++ix) {
      x[0] = ix * h;
      for (std::size_t iy = 0; iy < N; ++iy, ++flat) {
        x[1] = iy * h;
        const auto v = f(x);
        out.component(0)[flat] = v[0];
        out.component(1)[flat] = v[1];
      }
    }
  } else {
    std::size_t flat = 0;
    for (std::size_t ix = 0; ix < N; ++ix) {
      x[0] = ix * h;
      for (std::size_t iy = 0; iy < N; ++iy) {
        x[1] = iy * h;
        for (std::size_t iz = 0; iz < N; ++iz, ++flat) {
          x[2] = iz * h;
          const auto v = f(x);
          out.component(0)[flat] = v[0];
          out.component(1)[flat] = v[1];
          out.component(2)[flat] = v[2];
        }
      }
    }
  }
  return out;
}

// Taylor-Green vortex, divergence free by construction.
inline VectorFunction taylor_green(int dim, double amplitude, int mode,
                                   double length) {
  const double kappa = kTwoPi * mode / length;
  if (dim == 2) {
    return [=](const std::array<double, 3>& x) -> std::array<double, 3> {
      return {amplitude * std::sin(kappa * x[0]) * std::cos(kappa * x[1]),
              -amplitude * std::cos(kappa * x[0]) * std::sin(kappa * x[1]), 0.0};
    };
  }
  return [=](const std::array<double, 3>& x) -> std::array<double, 3> {
    return {amplitude * std::sin(kappa * x[0]) * std::cos(kappa * x[1]) *
                std::cos(kappa * x[2]),
            -amplitude * std::cos(kappa * x[0]) * std::sin(kappa * x[1]) *
                std::cos(kappa * x[2]),
            0.0};
  };
}

// Single shear mode b(y) e_1 with b = amplitude * cos(2 pi mode y / L).
// An exact steady state of the delta = 0 system when u = 0.
inline VectorFunction shear_mode(int /*dim*/, double amplitude, int mode,
                                 double length) {
  const double kappa = kTwoPi * mode / length;
  return [=](const std::array<double, 3>& x) -> std::array<double, 3> {
    return {amplitude * std::cos(kappa * x[1]), 0.0, 0.0};
  };
}

// Localized solenoidal vortex bump centered in the box: the curl of a
// Gaussian stream function, u = curl(psi e_3) with psi = A sigma^2
// exp(-r^2/(2 sigma^2)).  In L^1 and L^2, mean zero, divergence free.
inline VectorFunction gaussian_bump(int dim, double amplitude, double sigma,
                                    double length) {
  const double c = 0.5 * length;
  const double s2 = sigma * sigma;
  return [=](const std::array<double, 3>& x) -> std::array<double, 3> {
    const double dx = x[0] - c, dy = x[1] - c;
    const double dz = dim == 3 ? x[2] - c : 0.0;
    const double r2 = dx * dx + dy * dy + dz * dz;
    const double e = amplitude * std::exp(-0.5 * r2 / s2);
    return {e * dy, -e * dx, 0.0};
  };
}

// Hermitian random field supported on the shell band k_lo <= |k| <= k_hi,
// unit-variance complex Gaussian modes.  Not projected; callers wanting
// divergence-free data apply leray_project (see random_solenoidal).
inline SpectralVectorField random_hermitian_field(const Grid& g, std::uint64_t seed,
                                                  double k_lo, double k_hi) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralVectorField v(g.dim, g.size());
  const std::size_t n = g.size();
  const double lo2 = k_lo * k_lo, hi2 = k_hi * k_hi;
  for (int c = 0; c < g.dim; ++c) {
    auto comp = v.component(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double k2 = g.ksq[i];
      if (k2 < lo2 || k2 > hi2) continue;
      comp[i] = Complex(gauss(rng), gauss(rng));
    }
  }
  hermitian_symmetrize(v, g);
  zero_mean(v);
  return v;
}

// Band-limited random divergence-free data normalized to a target L2 norm.
inline SpectralVectorField random_solenoidal(const Grid& g, std::uint64_t seed,
                                             double k_lo, double k_hi,
                                             double target_l2) {
  SpectralVectorField v = random_hermitian_field(g, seed, k_lo, k_hi);
  leray_project(v, g);
  const double norm = l2_norm(v, g);
  if (norm > 0.0 && target_l2 > 0.0) {
    const double s = target_l2 / norm;
    for (Complex& z : v.data) z *= s;
  }
  return v;
}

}  // namespace mhdlab
