#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mhdlab/errors.hpp"

namespace mhdlab {

inline constexpr double kTwoPi = 6.2831853071795864769;

// Periodic box [0, L)^n sampled at N points per axis.  Wavenumbers follow
// the FFT index layout: k(i) = 2*pi*m/L with m = i for i < N/2 and m = i-N
// otherwise, so m ranges over {-N/2, ..., N/2-1}.
struct Grid {
  int dim = 0;
  int points = 0;     // N per axis
  double length = 0;  // L

  std::vector<double> axis_k;  // wavenumber by axis index, size N
  std::vector<double> ksq;     // |k|^2 by flat index, size N^dim

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(points);
    return s;
  }

  double dx() const { return length / points; }

  int mode(int axis_index) const {
    return axis_index < points / 2 ? axis_index : axis_index - points;
  }

  // Per-axis indices of a flat (row-major, last axis fastest) lattice index.
  void axis_indices(std::size_t flat, int idx[3]) const {
    const auto n = static_cast<std::size_t>(points);
    if (dim == 2) {
      idx[0] = static_cast<int>(flat / n);
      idx[1] = static_cast<int>(flat % n);
      idx[2] = 0;
    } else {
      idx[2] = static_cast<int>(flat % n);
      idx[1] = static_cast<int>((flat / n) % n);
      idx[0] = static_cast<int>(flat / (n * n));
    }
  }

  void wavevector(std::size_t flat, double k[3]) const {
    int idx[3];
    axis_indices(flat, idx);
    k[0] = axis_k[idx[0]];
    k[1] = axis_k[idx[1]];
    k[2] = dim == 3 ? axis_k[idx[2]] : 0.0;
  }

  // Flat index of the mode with all axis indices negated (mod N).
  std::size_t conjugate_index(std::size_t flat) const {
    const auto n = static_cast<std::size_t>(points);
    int idx[3];
    axis_indices(flat, idx);
    std::size_t out = 0;
    for (int d = 0; d < dim; ++d) {
      const std::size_t neg = idx[d] == 0 ? 0 : n - static_cast<std::size_t>(idx[d]);
      out = out * n + neg;
    }
    return out;
  }
};

inline Grid build_grid(int dim, int points, double length) {
  if (dim != 2 && dim != 3)
    throw ConfigError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  if (points < 8) throw ConfigError("grid needs at least 8 points per axis, got " + std::to_string(points));
  if (points % 2 != 0)
    throw ConfigError("points per axis must be even, got " + std::to_string(points));
  if (!(length > 0)) throw ConfigError("box length must be positive");

  Grid g;
  g.dim = dim;
  g.points = points;
  g.length = length;
  g.axis_k.resize(points);
  for (int i = 0; i < points; ++i) g.axis_k[i] = kTwoPi * g.mode(i) / length;

  g.ksq.resize(g.size());
  const auto n = static_cast<std::size_t>(points);
  if (dim == 2) {
    std::size_t flat = 0;
    for (std::size_t ix = 0; ix < n; ++ix)
      for (std::size_t iy = 0; iy < n; ++iy, ++flat) {
        const double kx = g.axis_k[ix], ky = g.axis_k[iy];
        g.ksq[flat] = kx * kx + ky * ky;
      }
  } else {
    std::size_t flat = 0;
    for (std::size_t ix = 0; ix < n; ++ix)
      for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t iz = 0; iz < n; ++iz, ++flat) {
          const double kx = g.axis_k[ix], ky = g.axis_k[iy], kz = g.axis_k[iz];
          g.ksq[flat] = kx * kx + ky * ky + kz * kz;
        }
  }
  return g;
}

}  // namespace mhdlab
