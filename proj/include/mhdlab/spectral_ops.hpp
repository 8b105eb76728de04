#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

// v_hat(k) -> v_hat(k) - k (k.v_hat)/|k|^2 for k != 0; the zero mode passes
// through unchanged.  Orthogonal projection onto divergence-free fields.
inline void leray_project(SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  double k[3];
  for (std::size_t i = 0; i < n; ++i) {
    const double k2 = g.ksq[i];
    if (k2 == 0.0) continue;
    g.wavevector(i, k);
    Complex dot(0.0, 0.0);
    for (int c = 0; c < v.dim; ++c) dot += k[c] * v.component(c)[i];
    dot /= k2;
    for (int c = 0; c < v.dim; ++c) v.component(c)[i] -= k[c] * dot;
  }
}

inline SpectralVectorField leray_projected(SpectralVectorField v, const Grid& g) {
  leray_project(v, g);
  return v;
}

// max over k of |k . v_hat(k)|
inline double max_divergence(const SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  double k[3];
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.ksq[i] == 0.0) continue;
    g.wavevector(i, k);
    Complex dot(0.0, 0.0);
    for (int c = 0; c < v.dim; ++c) dot += k[c] * v.component(c)[i];
    worst = std::max(worst, std::abs(dot));
  }
  return worst;
}

// 2/3-rule truncation: zero every coefficient with any per-axis |m| > N/3.
inline void dealias_23(SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  const int N = g.points;
  int idx[3];
  for (std::size_t i = 0; i < n; ++i) {
    g.axis_indices(i, idx);
    bool kill = false;
    for (int d = 0; d < g.dim; ++d) {
      const int m = g.mode(idx[d]);
      if (3 * std::abs(m) > N) kill = true;
    }
    if (kill)
      for (int c = 0; c < v.dim; ++c) v.component(c)[i] = Complex(0.0, 0.0);
  }
}

inline void dealias_23(std::span<Complex> v, const Grid& g) {
  const int N = g.points;
  int idx[3];
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.axis_indices(i, idx);
    for (int d = 0; d < g.dim; ++d) {
      if (3 * std::abs(g.mode(idx[d])) > N) {
        v[i] = Complex(0.0, 0.0);
        break;
      }
    }
  }
}

// L^n sum_k |v_hat(k)|^2 == box integral of |v|^2
inline double l2_norm_sq(const SpectralVectorField& v, const Grid& g) {
  double s = 0.0;
  for (const Complex& z : v.data) s += std::norm(z);
  return s * std::pow(g.length, g.dim);
}

inline double l2_norm(const SpectralVectorField& v, const Grid& g) {
  return std::sqrt(l2_norm_sq(v, g));
}

// L^n sum_k |k|^2 |v_hat(k)|^2 == box integral of |grad v|^2
inline double gradient_norm_sq(const SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  double s = 0.0;
  for (int c = 0; c < v.dim; ++c) {
    auto comp = v.component(c);
    for (std::size_t i = 0; i < n; ++i) s += g.ksq[i] * std::norm(comp[i]);
  }
  return s * std::pow(g.length, g.dim);
}

// Euclidean magnitude of the coefficient vector, maximized over the lattice.
inline double spectral_max_abs(const SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    for (int c = 0; c < v.dim; ++c) m += std::norm(v.component(c)[i]);
    worst = std::max(worst, m);
  }
  return std::sqrt(worst);
}

inline void zero_mean(SpectralVectorField& v) {
  for (int c = 0; c < v.dim; ++c) v.component(c)[0] = Complex(0.0, 0.0);
}

// v_hat(k) *= exp(-coeff * |k|^2 * tau); the exact heat multiplier.
inline void heat_multiply(SpectralVectorField& v, const Grid& g, double tau,
                          double coeff = 1.0) {
  if (coeff * tau == 0.0) return;
  const std::size_t n = g.size();
  for (int c = 0; c < v.dim; ++c) {
    auto comp = v.component(c);
    for (std::size_t i = 0; i < n; ++i)
      comp[i] *= std::exp(-coeff * tau * g.ksq[i]);
  }
}

// d/dx_axis as the spectral multiplier i*k_axis on a scalar component.
inline void apply_derivative(std::span<const Complex> in, std::span<Complex> out,
                             const Grid& g, int axis) {
  int idx[3];
  for (std::size_t i = 0; i < in.size(); ++i) {
    g.axis_indices(i, idx);
    const double k = g.axis_k[idx[axis]];
    out[i] = Complex(0.0, k) * in[i];
  }
}

// Enforce v_hat(-k) == conj(v_hat(k)); self-conjugate modes become real.
inline void hermitian_symmetrize(SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  for (int c = 0; c < v.dim; ++c) {
    auto comp = v.component(c);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = g.conjugate_index(i);
      if (j == i) {
        comp[i] = Complex(comp[i].real(), 0.0);
      } else if (j > i) {
        const Complex a = 0.5 * (comp[i] + std::conj(comp[j]));
        comp[i] = a;
        comp[j] = std::conj(a);
      }
    }
  }
}

inline double max_hermitian_asymmetry(const SpectralVectorField& v, const Grid& g) {
  const std::size_t n = g.size();
  double worst = 0.0;
  for (int c = 0; c < v.dim; ++c) {
    auto comp = v.component(c);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = g.conjugate_index(i);
      if (j < i) continue;
      worst = std::max(worst, std::abs(comp[i] - std::conj(comp[j])));
    }
  }
  return worst;
}

// Physical-space quadrature at the collocation points.
inline double physical_l2_norm_sq(const PhysicalVectorField& p, const Grid& g) {
  double s = 0.0;
  for (double x : p.data) s += x * x;
  return s * std::pow(g.dx(), g.dim);
}

inline double max_abs(const PhysicalVectorField& p) {
  double m = 0.0;
  for (double x : p.data) m = std::max(m, std::abs(x));
  return m;
}

// Box Lq norm of the pointwise Euclidean magnitude, direct quadrature.
inline double lq_norm(const PhysicalVectorField& p, const Grid& g, double q) {
  if (q < 2.0) throw ConfigError("Lq norm requires q >= 2");
  const std::size_t n = p.npts;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double m2 = 0.0;
    for (int c = 0; c < p.dim; ++c) {
      const double x = p.component(c)[i];
      m2 += x * x;
    }
    s += std::pow(m2, 0.5 * q);
  }
  return std::pow(s * std::pow(g.dx(), g.dim), 1.0 / q);
}

}  // namespace mhdlab
