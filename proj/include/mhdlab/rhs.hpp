#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/fft.hpp"
#include "mhdlab/spectral_ops.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

struct RhsResult {
  SpectralVectorField nu;  // Leray-projected F[(B.grad)B - (u.grad)u]
  SpectralVectorField nb;  // F[(B.grad)u - (u.grad)B]
  double max_abs_u = 0.0;  // pointwise max over components, physical space
  double max_abs_B = 0.0;
};

// Evaluates the nonlinear terms of the MHD system with products formed in
// physical space (convective form) and optional 2/3 dealiasing.  The Leray
// projection on nu absorbs the pressure gradient, so the evolution never
// sees an explicit pressure.
class RhsWorkspace {
 public:
  RhsWorkspace(const Grid& g, Fft& fft) : g_(g), fft_(fft) {}

  RhsResult nonlinear(const MHDState& s, bool dealias) {
    const int dim = g_.dim;
    const std::size_t n = g_.size();
    ensure_buffers();

    fft_.inverse(s.u, u_phys_);
    fft_.inverse(s.B, B_phys_);

    RhsResult out;
    out.nu = SpectralVectorField(dim, n);
    out.nb = SpectralVectorField(dim, n);
    out.max_abs_u = max_abs(u_phys_);
    out.max_abs_B = max_abs(B_phys_);
    double probe = 0.0;  // NaN-propagating, unlike the max above
    for (double x : u_phys_.data) probe += x;
    for (double x : B_phys_.data) probe += x;
    if (!std::isfinite(probe))
      throw BlowupError("non-finite field entering nonlinear term at t = " +
                            std::to_string(s.t),
                        s.t);

    for (int i = 0; i < dim; ++i) {
      std::fill(conv_uu_.begin(), conv_uu_.end(), 0.0);
      std::fill(conv_bu_.begin(), conv_bu_.end(), 0.0);
      std::fill(conv_ub_.begin(), conv_ub_.end(), 0.0);
      std::fill(conv_bb_.begin(), conv_bb_.end(), 0.0);
      for (int j = 0; j < dim; ++j) {
        // d_j u_i feeds both (u.grad)u_i and (B.grad)u_i
        apply_derivative(s.u.component(i), spec_scratch_, g_, j);
        fft_.inverse(spec_scratch_, deriv_);
        auto uj = u_phys_.component(j);
        auto bj = B_phys_.component(j);
        for (std::size_t p = 0; p < n; ++p) {
          conv_uu_[p] += uj[p] * deriv_[p];
          conv_bu_[p] += bj[p] * deriv_[p];
        }
        apply_derivative(s.B.component(i), spec_scratch_, g_, j);
        fft_.inverse(spec_scratch_, deriv_);
        for (std::size_t p = 0; p < n; ++p) {
          conv_ub_[p] += uj[p] * deriv_[p];
          conv_bb_[p] += bj[p] * deriv_[p];
        }
      }
      for (std::size_t p = 0; p < n; ++p) phys_scratch_[p] = conv_bb_[p] - conv_uu_[p];
      fft_.forward(phys_scratch_, out.nu.component(i));
      for (std::size_t p = 0; p < n; ++p) phys_scratch_[p] = conv_bu_[p] - conv_ub_[p];
      fft_.forward(phys_scratch_, out.nb.component(i));
    }
    if (dealias) {
      dealias_23(out.nu, g_);
      dealias_23(out.nb, g_);
    }
    leray_project(out.nu, g_);
    return out;
  }

  // Total-pressure coefficients from the Poisson equation
  //   laplace p = sum_{j,l} d_j d_l (B^j B^l - u^j u^l),
  // solved mode-wise with p_hat(0) = 0.  Diagnostic only.
  std::vector<Complex> recover_pressure(const MHDState& s, bool dealias) {
    const int dim = g_.dim;
    const std::size_t n = g_.size();
    ensure_buffers();
    fft_.inverse(s.u, u_phys_);
    fft_.inverse(s.B, B_phys_);

    std::vector<Complex> p_hat(n, Complex(0.0, 0.0));
    double k[3];
    for (int j = 0; j < dim; ++j)
      for (int l = j; l < dim; ++l) {
        auto uj = u_phys_.component(j), ul = u_phys_.component(l);
        auto bj = B_phys_.component(j), bl = B_phys_.component(l);
        for (std::size_t p = 0; p < n; ++p)
          phys_scratch_[p] = bj[p] * bl[p] - uj[p] * ul[p];
        fft_.forward(phys_scratch_, spec_scratch_);
        if (dealias) dealias_23(std::span<Complex>(spec_scratch_), g_);
        const double sym = (l == j) ? 1.0 : 2.0;  // off-diagonal pairs appear twice
        for (std::size_t p = 0; p < n; ++p) {
          const double k2 = g_.ksq[p];
          if (k2 == 0.0) continue;
          g_.wavevector(p, k);
          p_hat[p] += sym * k[j] * k[l] / k2 * spec_scratch_[p];
        }
      }
    return p_hat;
  }

  Fft& fft() { return fft_; }
  const Grid& grid() const { return g_; }

 private:
  void ensure_buffers() {
    const std::size_t n = g_.size();
    if (u_phys_.npts != n) {
      u_phys_ = PhysicalVectorField(g_.dim, n);
      B_phys_ = PhysicalVectorField(g_.dim, n);
      deriv_.resize(n);
      conv_uu_.resize(n);
      conv_bu_.resize(n);
      conv_ub_.resize(n);
      conv_bb_.resize(n);
      phys_scratch_.resize(n);
      spec_scratch_.resize(n);
    }
  }

  const Grid& g_;
  Fft& fft_;
  PhysicalVectorField u_phys_, B_phys_;
  std::vector<double> deriv_, conv_uu_, conv_bu_, conv_ub_, conv_bb_, phys_scratch_;
  std::vector<Complex> spec_scratch_;
};

}  // namespace mhdlab
