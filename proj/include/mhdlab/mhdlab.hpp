#pragma once

#include "mhdlab/config.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/experiments.hpp"
#include "mhdlab/fft.hpp"
#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/orchestrate.hpp"
#include "mhdlab/picard.hpp"
#include "mhdlab/quadrature.hpp"
#include "mhdlab/rhs.hpp"
#include "mhdlab/run.hpp"
#include "mhdlab/scaling.hpp"
#include "mhdlab/snapshot.hpp"
#include "mhdlab/spectral_ops.hpp"
#include "mhdlab/state.hpp"
#include "mhdlab/stepper.hpp"
