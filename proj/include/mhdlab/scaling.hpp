#pragma once

#include <cmath>
#include <utility>

#include "mhdlab/fft.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/spectral_ops.hpp"

namespace mhdlab {

enum class BoxPolicy { growing, fixed };

// Scaled continuum data x -> alpha^{n/2} u0(alpha (x - C_big) + C_base):
// the self-similar family is scaled about the box center so the grown box
// L/alpha keeps the support fraction fixed.
inline VectorFunction scale_function(const VectorFunction& f, double alpha,
                                     double base_length, double scaled_length,
                                     int dim) {
  const double amp = std::pow(alpha, 0.5 * dim);
  const double cb = 0.5 * base_length, cs = 0.5 * scaled_length;
  return [=](const std::array<double, 3>& x) -> std::array<double, 3> {
    const std::array<double, 3> y{alpha * (x[0] - cs) + cb,
                                  alpha * (x[1] - cs) + cb,
                                  alpha * (x[2] - cs) + cb};
    auto v = f(y);
    return {amp * v[0], amp * v[1], amp * v[2]};
  };
}

// Grid for the growing-box policy: L/alpha at (nearly) fixed dx.
inline Grid scaled_grid(const Grid& base, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw ConfigError("scale factor must lie in (0, 1]");
  int pts = static_cast<int>(std::lround(base.points / alpha));
  if (pts % 2 != 0) ++pts;
  return build_grid(base.dim, pts, base.length / alpha);
}

// x -> alpha^{n/2} f(alpha x) realized through the exact spectral embedding:
// the base-box series coefficient at mode m moves unchanged (times
// alpha^{n/2}) to mode m of the L/alpha box, whose wavenumber is alpha k.
// L2 norms are preserved exactly; the H1 seminorm picks up alpha^2.
inline SpectralVectorField scale_data(const SpectralVectorField& base_hat,
                                      const Grid& base, const Grid& big,
                                      double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw ConfigError("scale factor must lie in (0, 1]");
  if (big.dim != base.dim) throw ConfigError("scale_data dimension mismatch");
  if (big.points < base.points)
    throw ConfigError("target grid cannot hold the base modes");

  const double amp = std::pow(alpha, 0.5 * base.dim);
  SpectralVectorField out(base.dim, big.size());

  // Base Nyquist content splits across +-N/2 on the wider lattice (the
  // usual zero-padding rule), keeping the embedded field Hermitian.
  const int nb = base.points, ng = big.points;
  struct Target {
    int index;
    double weight;
  };
  auto targets = [&](int axis_index, Target t[2]) -> int {
    int m = axis_index < nb / 2 ? axis_index : axis_index - nb;
    if (m == -nb / 2 && ng > nb) {
      t[0] = {ng - nb / 2, 0.5};
      t[1] = {nb / 2, 0.5};
      return 2;
    }
    t[0] = {m >= 0 ? m : m + ng, 1.0};
    return 1;
  };

  int idx[3];
  Target tg[3][2];
  int counts[3];
  for (std::size_t i = 0; i < base.size(); ++i) {
    base.axis_indices(i, idx);
    for (int d = 0; d < base.dim; ++d) counts[d] = targets(idx[d], tg[d]);
    for (int a = 0; a < counts[0]; ++a)
      for (int b = 0; b < counts[1]; ++b)
        for (int c3 = 0; c3 < (base.dim == 3 ? counts[2] : 1); ++c3) {
          std::size_t j = static_cast<std::size_t>(tg[0][a].index);
          double w = tg[0][a].weight * tg[1][b].weight;
          j = j * ng + tg[1][b].index;
          if (base.dim == 3) {
            j = j * ng + tg[2][c3].index;
            w *= tg[2][c3].weight;
          }
          for (int c = 0; c < base.dim; ++c)
            out.component(c)[j] += amp * w * base_hat.component(c)[i];
        }
  }
  return out;
}

// Fixed-box sampling of the scaled family.  support_radius is the radius
// (about the box center) beyond which the base data is negligible; the
// widened support must still fit in the box.
inline PhysicalVectorField scale_data_fixed_box(const VectorFunction& f,
                                                double alpha, const Grid& g,
                                                double support_radius) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw ConfigError("scale factor must lie in (0, 1]");
  if (support_radius / alpha > 0.5 * g.length)
    throw ConfigError("scaled data support exceeds the box under the fixed-box policy");
  return sample_field(g, scale_function(f, alpha, g.length, g.length, g.dim));
}

// Relative L2 difference of the two routes of the self-similarity identity
//   K * u0^alpha (., t)  ==  alpha^{n/2} u_tilde(alpha ., alpha^2 t):
// left, sample the scaled data on the grown box and heat-evolve to t;
// right, heat-evolve the base data to alpha^2 t and rescale spectrally.
inline double self_similarity_check(const VectorFunction& u0, double alpha,
                                    double t, const Grid& base) {
  const Grid big = scaled_grid(base, alpha);
  Fft fft_base(base), fft_big(big);

  PhysicalVectorField left_phys = sample_field(
      big, scale_function(u0, alpha, base.length, big.length, base.dim));
  SpectralVectorField left = fft_big.forward(left_phys);
  heat_multiply(left, big, t);

  PhysicalVectorField base_phys = sample_field(base, u0);
  SpectralVectorField evolved = fft_base.forward(base_phys);
  heat_multiply(evolved, base, alpha * alpha * t);
  SpectralVectorField right = scale_data(evolved, base, big, alpha);

  double diff = 0.0;
  for (std::size_t i = 0; i < left.data.size(); ++i)
    diff += std::norm(left.data[i] - right.data[i]);
  const double ref = l2_norm_sq(right, big);
  if (ref == 0.0) return 0.0;
  return std::sqrt(diff * std::pow(big.length, big.dim) / ref);
}

}  // namespace mhdlab
