#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mhdlab {

using Complex = std::complex<double>;

// n-component array of complex Fourier coefficients on the full lattice.
// Component-major storage, row-major lattice order within a component.
struct SpectralVectorField {
  int dim = 0;
  std::size_t npts = 0;
  std::vector<Complex> data;

  SpectralVectorField() = default;
  SpectralVectorField(int d, std::size_t n) : dim(d), npts(n), data(d * n) {}

  std::span<Complex> component(int c) { return {data.data() + c * npts, npts}; }
  std::span<const Complex> component(int c) const {
    return {data.data() + c * npts, npts};
  }
};

struct PhysicalVectorField {
  int dim = 0;
  std::size_t npts = 0;
  std::vector<double> data;

  PhysicalVectorField() = default;
  PhysicalVectorField(int d, std::size_t n) : dim(d), npts(n), data(d * n) {}

  std::span<double> component(int c) { return {data.data() + c * npts, npts}; }
  std::span<const double> component(int c) const {
    return {data.data() + c * npts, npts};
  }
};

}  // namespace mhdlab
