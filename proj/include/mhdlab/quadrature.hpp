#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

// Gauss-Legendre nodes and weights on [a, b], Newton iteration on the
// Legendre polynomial roots.
inline void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w) {
  if (n < 1) throw ConfigError("quadrature order must be >= 1");
  x.resize(n);
  w.resize(n);
  const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double z1, pp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > 1e-15);
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    x[i] = xm - xl * z;
    x[n - 1 - i] = xm + xl * z;
    w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Radial Fourier amplitude of whole-space data on quadrature nodes, for the
// semi-analytic R^n computations: integrals of the form
//   c_n sum_i w_i f(rho_i) a_i^2 rho_i^{n-1},
// with c_n the surface area of the unit sphere (2 pi or 4 pi).
struct RadialProfile {
  int dim = 2;
  std::vector<double> nodes;    // strictly increasing, > 0
  std::vector<double> weights;  // positive
  std::vector<double> amplitude;

  double sphere_area() const { return dim == 2 ? kTwoPi : 2.0 * kTwoPi; }

  void validate() const {
    if (dim != 2 && dim != 3) throw ConfigError("radial profile dimension must be 2 or 3");
    if (nodes.size() != weights.size() || nodes.size() != amplitude.size() ||
        nodes.empty())
      throw ConfigError("radial profile arrays must be non-empty and same size");
    double prev = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!(nodes[i] > prev)) throw ConfigError("radial nodes must be strictly increasing and positive");
      if (!(weights[i] > 0.0)) throw ConfigError("radial weights must be positive");
      prev = nodes[i];
    }
  }

  // c_n sum w_i g(rho_i) a_i^2 rho_i^{n-1}
  double integrate(const std::function<double(double)>& g_of_rho) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      s += weights[i] * g_of_rho(nodes[i]) * amplitude[i] * amplitude[i] *
           std::pow(nodes[i], dim - 1);
    return sphere_area() * s;
  }
};

// Builds a profile for amplitude function a(rho) on [0, R]: R grows until the
// integrand tail is below 1e-14 of the total, then the composite
// Gauss-Legendre node count doubles until the squared-norm integral is stable
// to 1e-10 relative.
inline RadialProfile build_radial_profile(int dim,
                                          const std::function<double(double)>& a,
                                          double r_init = 8.0) {
  RadialProfile p;
  p.dim = dim;

  auto mass = [&](double lo, double hi) {
    std::vector<double> x, w;
    gauss_legendre(64, lo, hi, x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ai = a(x[i]);
      s += w[i] * ai * ai * std::pow(x[i], dim - 1);
    }
    return s;
  };

  double R = r_init;
  double total = mass(0.0, R);
  for (int it = 0; it < 60; ++it) {
    const double tail = mass(R, 2.0 * R);
    if (tail <= 1e-14 * std::max(total, 1e-300)) break;
    total += tail;
    R *= 2.0;
  }

  const int panels = 8;
  int per_panel = 8;
  double prev_norm = -1.0;
  std::vector<double> x, w;
  for (int it = 0; it < 12; ++it) {
    p.nodes.clear();
    p.weights.clear();
    p.amplitude.clear();
    for (int pa = 0; pa < panels; ++pa) {
      gauss_legendre(per_panel, R * pa / panels, R * (pa + 1) / panels, x, w);
      for (int i = 0; i < per_panel; ++i) {
        p.nodes.push_back(x[i]);
        p.weights.push_back(w[i]);
        p.amplitude.push_back(a(x[i]));
      }
    }
    const double norm = p.integrate([](double) { return 1.0; });
    if (prev_norm >= 0.0 && std::abs(norm - prev_norm) <= 1e-10 * std::abs(norm))
      break;
    prev_norm = norm;
    per_panel *= 2;
  }
  p.validate();
  return p;
}

// || e^{t laplace} u_0^alpha ||_2 for the L2-preserving scaled family, via
//   ( c_n sum_i w_i e^{-2 rho_i^2 alpha^2 t} a_i^2 rho_i^{n-1} )^{1/2}.
// At t = 0 this is ||u_0||_2 in the profile's own normalization.
inline double heat_semigroup_norm(const RadialProfile& p, double alpha, double t) {
  const double c = 2.0 * alpha * alpha * t;
  return std::sqrt(
      p.integrate([c](double rho) { return std::exp(-c * rho * rho); }));
}

// Closed-form profiles used by the experiments.
//
// Pure Gaussian amplitude a(rho) = e^{-rho^2/2}: the heat ratio has the
// closed form (1 + 2 alpha^2 t)^{-n/4}.
inline RadialProfile gaussian_radial_profile(int dim) {
  return build_radial_profile(dim, [](double r) { return std::exp(-0.5 * r * r); });
}

// Amplitude of the solenoidal Gaussian vortex bump (curl of a Gaussian
// stream function): |u_hat|(rho) = const * rho * e^{-sigma^2 rho^2 / 2},
// scaled by (2 pi)^{-n/2} so the profile norm at t = 0 equals the physical
// L2 norm of the bump.  In 3D the constant carries the angular RMS sqrt(2/3)
// of |xi_perp|/rho.
inline RadialProfile vortex_bump_radial_profile(int dim, double amplitude,
                                                double sigma) {
  const double c0 = amplitude * std::pow(sigma, dim + 2) *
                    (dim == 3 ? std::sqrt(2.0 / 3.0) : 1.0);
  return build_radial_profile(
      dim,
      [c0, sigma](double r) { return c0 * r * std::exp(-0.5 * sigma * sigma * r * r); },
      std::max(8.0, 10.0 / sigma));
}

}  // namespace mhdlab
