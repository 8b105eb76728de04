#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

// FFTW plan creation is not thread safe; execution on private buffers is.
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// Complex-to-complex transforms on the full lattice with the normalization
//   forward:  v_hat(k) = (1/N^n) sum_x v(x) e^{-i k.x}
//   inverse:  v(x)     = sum_k v_hat(k) e^{+i k.x}
// so that L^n * sum_k |v_hat|^2 equals the box integral of |v|^2 (Plancherel).
//
// Each instance owns its plans and scratch buffers: use one Fft per thread.
class Fft {
 public:
  explicit Fft(const Grid& g) : dim_(g.dim), npts_(g.size()) {
    in_.resize(npts_);
    out_.resize(npts_);
    int dims[3] = {g.points, g.points, g.points};
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd_ = fftw_plan_dft(dim_, dims, cast(in_.data()), cast(out_.data()),
                         FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(dim_, dims, cast(in_.data()), cast(out_.data()),
                         FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
  }

  ~Fft() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
  }

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return npts_; }

  void forward(std::span<const double> phys, std::span<Complex> spec) {
    check(phys.size());
    check(spec.size());
    for (std::size_t i = 0; i < npts_; ++i) in_[i] = Complex(phys[i], 0.0);
    fftw_execute(fwd_);
    const double scale = 1.0 / static_cast<double>(npts_);
    for (std::size_t i = 0; i < npts_; ++i) spec[i] = out_[i] * scale;
  }

  // Inverse transform of Hermitian data; returns the real part and records
  // the largest imaginary residue seen since the last reset.
  void inverse(std::span<const Complex> spec, std::span<double> phys) {
    check(spec.size());
    check(phys.size());
    std::copy(spec.begin(), spec.end(), in_.begin());
    fftw_execute(bwd_);
    double imax = 0.0;
    for (std::size_t i = 0; i < npts_; ++i) {
      imax = std::max(imax, std::abs(out_[i].imag()));
      phys[i] = out_[i].real();
    }
    max_imag_ = std::max(max_imag_, imax);
  }

  void forward(const PhysicalVectorField& p, SpectralVectorField& s) {
    for (int c = 0; c < p.dim; ++c) forward(p.component(c), s.component(c));
  }

  void inverse(const SpectralVectorField& s, PhysicalVectorField& p) {
    for (int c = 0; c < s.dim; ++c) inverse(s.component(c), p.component(c));
  }

  SpectralVectorField forward(const PhysicalVectorField& p) {
    SpectralVectorField s(p.dim, p.npts);
    forward(p, s);
    return s;
  }

  PhysicalVectorField inverse(const SpectralVectorField& s) {
    PhysicalVectorField p(s.dim, s.npts);
    inverse(s, p);
    return p;
  }

  double max_imag_seen() const { return max_imag_; }
  void reset_max_imag() { max_imag_ = 0.0; }

 private:
  static fftw_complex* cast(Complex* p) {
    return reinterpret_cast<fftw_complex*>(p);
  }
  void check(std::size_t n) const {
    if (n != npts_) throw std::invalid_argument("field size does not match grid");
  }

  int dim_;
  std::size_t npts_;
  std::vector<Complex> in_, out_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
  double max_imag_ = 0.0;
};

}  // namespace mhdlab
