#include <cmath>

#include "catch_amalgamated.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/run.hpp"

using namespace mhdlab;

namespace {

MHDState taylor_green_state(const Grid& g, Fft& fft, double delta,
                            double b_amp = 0.0) {
  MHDState s;
  s.delta = delta;
  s.u = fft.forward(sample_field(g, taylor_green(2, 1.0, 1, g.length)));
  s.B = b_amp != 0.0
            ? fft.forward(sample_field(g, shear_mode(2, b_amp, 2, g.length)))
            : SpectralVectorField(2, g.size());
  return s;
}

}  // namespace

TEST_CASE("T = 0 produces a single record with the initial energies", "[run]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  SolverConfig cfg;
  cfg.T = 0.0;
  RunResult rr = run(taylor_green_state(g, fft, 1.0), cfg, {}, g, fft);
  REQUIRE(rr.records.size() == 1);
  CHECK(rr.records[0].t == 0.0);
  CHECK(rr.records[0].E_u == Catch::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
  CHECK(rr.records[0].E_B == 0.0);
  CHECK(rr.records[0].diss_u_cum == 0.0);
}

TEST_CASE("B = 0 is an invariant subspace and u-energy decays", "[run]") {
  const Grid g = build_grid(2, 64, kTwoPi);
  Fft fft(g);
  SolverConfig cfg;
  cfg.dt = 5e-3;
  cfg.T = 0.25;
  cfg.record_every = 10;
  RunResult rr = run(taylor_green_state(g, fft, 1.0), cfg, {}, g, fft);
  REQUIRE(rr.records.size() >= 3);
  double prev = rr.records.front().E_u;
  for (std::size_t i = 1; i < rr.records.size(); ++i) {
    CHECK(rr.records[i].E_B == 0.0);
    CHECK(rr.records[i].E_u < prev);
    prev = rr.records[i].E_u;
  }
  CHECK(rr.records.back().t == Catch::Approx(0.25));
}

TEST_CASE("swapping u0 and B0 preserves the initial combined energy", "[run]") {
  const Grid g = build_grid(2, 64, kTwoPi);
  Fft fft(g);
  SolverConfig cfg;
  cfg.dt = 5e-3;
  cfg.T = 0.1;
  cfg.record_every = 5;

  MHDState a = taylor_green_state(g, fft, 1.0, 0.5);
  MHDState b;
  b.delta = 1.0;
  b.u = a.B;
  b.B = a.u;
  RunResult ra = run(a, cfg, {}, g, fft);
  RunResult rb = run(b, cfg, {}, g, fft);
  CHECK(ra.records.front().E_u + ra.records.front().E_B ==
        Catch::Approx(rb.records.front().E_u + rb.records.front().E_B)
            .epsilon(1e-12));
}

TEST_CASE("linear-only runs satisfy the energy identity to 1e-8", "[run]") {
  for (int N : {16, 32, 48}) {
    const Grid g = build_grid(2, N, kTwoPi);
    Fft fft(g);
    MHDState s;
    s.delta = 0.7;
    s.u = random_solenoidal(g, 2, 1.0, 4.0, 1.0);
    s.B = random_solenoidal(g, 3, 1.0, 4.0, 0.8);
    SolverConfig cfg;
    cfg.dt = 2e-4;
    cfg.T = 0.02;
    cfg.nonlinear = false;
    RunResult rr = run(s, cfg, {}, g, fft);
    CHECK(energy_balance_residual(rr.records, 0.7) <= 1e-8);
  }
}

TEST_CASE("energy identity survives a partial final step", "[run]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  MHDState s;
  s.delta = 0.7;
  s.u = random_solenoidal(g, 2, 1.0, 4.0, 1.0);
  s.B = random_solenoidal(g, 3, 1.0, 4.0, 0.8);
  SolverConfig cfg;
  cfg.dt = 2e-4;
  cfg.T = 0.0205;  // 102 full steps plus a half step
  cfg.nonlinear = false;
  RunResult rr = run(s, cfg, {}, g, fft);
  CHECK(rr.records.back().t == Catch::Approx(0.0205));
  CHECK(energy_balance_residual(rr.records, 0.7) <= 1e-8);
}

TEST_CASE("nonlinear run stays real and divergence-free", "[run]") {
  const Grid g = build_grid(2, 64, kTwoPi);
  Fft fft(g);
  SolverConfig cfg;
  cfg.dt = 5e-3;
  cfg.T = 0.2;
  cfg.record_every = 10;

  std::vector<MHDState> snaps;
  RunResult rr = run(taylor_green_state(g, fft, 1.0, 0.5), cfg, {}, g, fft,
                     [&](const DiagnosticsRecord&, const MHDState& s) {
                       snaps.push_back(s);
                     });
  REQUIRE(!snaps.empty());

  const double e0 = rr.records.front().E_u + rr.records.front().E_B;
  double prev_combined = e0;
  for (const auto& r : rr.records) {
    const double e = r.E_u + r.E_B;
    CHECK(e <= prev_combined + 1e-8 * e0);
    prev_combined = e;
  }
  Fft probe(g);
  for (const MHDState& s : snaps) {
    const double scale_u = std::max(1.0, spectral_max_abs(s.u, g));
    const double scale_b = std::max(1.0, spectral_max_abs(s.B, g));
    CHECK(max_divergence(s.u, g) <= 1e-10 * scale_u);
    CHECK(max_divergence(s.B, g) <= 1e-10 * scale_b);
    probe.reset_max_imag();
    PhysicalVectorField p(2, g.size());
    probe.inverse(s.u, p);
    probe.inverse(s.B, p);
    CHECK(probe.max_imag_seen() <= 1e-12 * std::max(1.0, max_abs(p)));
  }
}

TEST_CASE("linear decay of every mode is the exact multiplier", "[run]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  SpectralVectorField u0 = random_solenoidal(g, 5, 1.0, 9.0, 1.0);
  SpectralVectorField B0 = random_solenoidal(g, 6, 1.0, 9.0, 1.0);

  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.T = 0.2;
  cfg.nonlinear = false;
  SimulationDriver drv(MHDState{0.0, u0, B0, 0.35}, cfg, {}, g, fft);
  drv.advance_to(0.2);
  const MHDState& fin = drv.state();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double mu = std::exp(-g.ksq[i] * 0.2);
    const double mb = std::exp(-0.35 * g.ksq[i] * 0.2);
    for (int c = 0; c < 2; ++c) {
      const Complex eu = u0.component(c)[i] * mu;
      const Complex eb = B0.component(c)[i] * mb;
      if (std::abs(eu) > 1e-14)
        worst = std::max(worst, std::abs(fin.u.component(c)[i] - eu) / std::abs(eu));
      if (std::abs(eb) > 1e-14)
        worst = std::max(worst, std::abs(fin.B.component(c)[i] - eb) / std::abs(eb));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("solver config validation", "[run]") {
  SolverConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.dt = 1e-3;
  cfg.T = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.T = 1.0;
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
