#pragma once

#include "mhdlab/field.hpp"

namespace mhdlab {

// Full solution snapshot: spectral velocity and magnetic field at time t.
// delta >= 0 is the magnetic diffusivity; delta = 0 selects the regime with
// no magnetic diffusion.
struct MHDState {
  double t = 0.0;
  SpectralVectorField u;
  SpectralVectorField B;
  double delta = 1.0;
};

}  // namespace mhdlab
