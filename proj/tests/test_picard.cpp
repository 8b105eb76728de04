#include <cmath>

#include "catch_amalgamated.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/picard.hpp"
#include "mhdlab/run.hpp"

using namespace mhdlab;

TEST_CASE("zeroth iterate is the heat evolution", "[picard]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  SpectralVectorField u0 = random_solenoidal(g, 1, 1.0, 4.0, 0.01);
  SpectralVectorField B0 = random_solenoidal(g, 2, 1.0, 4.0, 0.01);

  PicardOptions opts;
  opts.iterations = 0;
  opts.nodes = 8;
  PicardResult pr = picard_iterate(u0, B0, 0.5, 0.4, opts, g, fft);
  REQUIRE(pr.trajectory.size() == 9);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int c = 0; c < 2; ++c) {
      const Complex eu = u0.component(c)[i] * std::exp(-g.ksq[i] * 0.4);
      const Complex eb = B0.component(c)[i] * std::exp(-0.5 * g.ksq[i] * 0.4);
      worst = std::max(worst,
                       std::abs(pr.at_final_time().u.component(c)[i] - eu));
      worst = std::max(worst,
                       std::abs(pr.at_final_time().B.component(c)[i] - eb));
    }
  CHECK(worst <= 1e-14);
}

TEST_CASE("zero data stays zero through every iterate", "[picard]") {
  const Grid g = build_grid(2, 16, kTwoPi);
  Fft fft(g);
  SpectralVectorField z(2, g.size());
  PicardOptions opts;
  opts.iterations = 3;
  opts.nodes = 4;
  PicardResult pr = picard_iterate(z, z, 1.0, 0.3, opts, g, fft);
  for (const auto& s : pr.trajectory) {
    CHECK(spectral_max_abs(s.u, g) == 0.0);
    CHECK(spectral_max_abs(s.B, g) == 0.0);
  }
  for (double d : pr.update_norms) CHECK(d == 0.0);
}

TEST_CASE("small data cross-validates against the RK4 reference", "[picard]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  SpectralVectorField u0 = random_solenoidal(g, 7, 1.0, 3.0, 0.01);
  SpectralVectorField B0 = random_solenoidal(g, 8, 1.0, 3.0, 0.01);

  PicardOptions opts;
  opts.iterations = 6;
  opts.nodes = 64;
  PicardResult pr = picard_iterate(u0, B0, 1.0, 0.5, opts, g, fft);

  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 0.5;
  SimulationDriver drv(MHDState{0.0, u0, B0, 1.0}, cfg, {}, g, fft);
  drv.advance_to(0.5);

  SpectralVectorField du = pr.at_final_time().u;
  for (std::size_t i = 0; i < du.data.size(); ++i)
    du.data[i] -= drv.state().u.data[i];
  CHECK(l2_norm(du, g) <= 1e-4);

  // geometric contraction after the first update
  for (std::size_t i = 1; i + 1 < pr.update_norms.size(); ++i) {
    if (pr.update_norms[i + 1] < 1e-15) break;
    CHECK(pr.update_norms[i + 1] <= 0.5 * pr.update_norms[i]);
  }
}

TEST_CASE("divergence guard triggers on large data", "[picard]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  SpectralVectorField u0 = random_solenoidal(g, 9, 1.0, 5.0, 200.0);
  SpectralVectorField B0 = random_solenoidal(g, 10, 1.0, 5.0, 200.0);
  PicardOptions opts;
  opts.iterations = 8;
  opts.nodes = 16;
  CHECK_THROWS_AS(picard_iterate(u0, B0, 1.0, 2.0, opts, g, fft),
                  PicardDivergenceError);
}

TEST_CASE("picard rejects delta = 0 and bad parameters", "[picard]") {
  const Grid g = build_grid(2, 16, kTwoPi);
  Fft fft(g);
  SpectralVectorField z(2, g.size());
  PicardOptions opts;
  CHECK_THROWS_AS(picard_iterate(z, z, 0.0, 1.0, opts, g, fft), ConfigError);
  opts.nodes = 0;
  CHECK_THROWS_AS(picard_iterate(z, z, 1.0, 1.0, opts, g, fft), ConfigError);
}
