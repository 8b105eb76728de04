// Independent oracles used by the tests: finite-difference derivatives and
// physical-space quadratures that never touch the spectral implementation
// paths they check.
#pragma once

#include <cmath>
#include <cstddef>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"

namespace oracle {

using mhdlab::Grid;
using mhdlab::PhysicalVectorField;

// 4th-order central difference of component c along axis, periodic wrap.
inline double fd_derivative(const PhysicalVectorField& f, const Grid& g, int c,
                            int axis, std::size_t flat) {
  const auto N = static_cast<std::size_t>(g.points);
  int idx[3];
  g.axis_indices(flat, idx);
  auto at = [&](int shift) {
    int j[3] = {idx[0], idx[1], idx[2]};
    j[axis] = static_cast<int>((j[axis] + shift + 2 * g.points) % g.points);
    std::size_t out = 0;
    for (int d = 0; d < g.dim; ++d) out = out * N + static_cast<std::size_t>(j[d]);
    return f.component(c)[out];
  };
  const double h = g.dx();
  return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
}

inline double fd_gradient_norm_sq(const PhysicalVectorField& f, const Grid& g) {
  double s = 0.0;
  for (int c = 0; c < g.dim; ++c)
    for (int axis = 0; axis < g.dim; ++axis)
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = fd_derivative(f, g, c, axis, i);
        s += d * d;
      }
  return s * std::pow(g.dx(), g.dim);
}

// (a . grad) b with finite-difference derivatives.
inline PhysicalVectorField fd_convective(const PhysicalVectorField& a,
                                         const PhysicalVectorField& b,
                                         const Grid& g) {
  PhysicalVectorField out(g.dim, g.size());
  for (int i = 0; i < g.dim; ++i)
    for (std::size_t p = 0; p < g.size(); ++p) {
      double v = 0.0;
      for (int j = 0; j < g.dim; ++j)
        v += a.component(j)[p] * fd_derivative(b, g, i, j, p);
      out.component(i)[p] = v;
    }
  return out;
}

inline double rel_l2_diff(const PhysicalVectorField& a,
                          const PhysicalVectorField& b, const Grid& g) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    num += d * d;
    den += b.data[i] * b.data[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num) * std::pow(g.dx(), 0);
}

}  // namespace oracle
