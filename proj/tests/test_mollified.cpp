#include <cmath>

#include "catch_amalgamated.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/run.hpp"

using namespace mhdlab;

namespace {

std::vector<MHDState> collect_snapshots(const Grid& g, Fft& fft, bool nonlinear,
                                        double T, double dt, int record_every) {
  MHDState init;
  init.delta = 1.0;
  init.u = fft.forward(sample_field(g, taylor_green(2, 1.0, 1, g.length)));
  init.B = fft.forward(sample_field(g, shear_mode(2, 0.5, 2, g.length)));
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.T = T;
  cfg.nonlinear = nonlinear;
  cfg.record_every = record_every;
  std::vector<MHDState> snaps;
  run(init, cfg, {}, g, fft,
      [&](const DiagnosticsRecord&, const MHDState& s) { snaps.push_back(s); });
  return snaps;
}

}  // namespace

TEST_CASE("heat flow attains the mollified inequality with equality", "[mollified]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  auto snaps = collect_snapshots(g, fft, false, 0.5, 0.01, 10);
  REQUIRE(snaps.size() >= 3);
  const double e0 = l2_norm_sq(snaps.front().u, g);
  for (auto phi : {+[](double k2) { return std::exp(-k2); },
                   +[](double k2) { return 1.0 / (1.0 + k2); }}) {
    const double resid = mollified_energy_check(snaps, 1, snaps.size() - 1, phi,
                                                g, fft, false);
    CHECK(std::abs(resid) <= 1e-8 * e0);
  }
}

TEST_CASE("s = t with the identity multiplier gives residual zero", "[mollified]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);
  auto snaps = collect_snapshots(g, fft, true, 0.1, 0.005, 10);
  const double resid = mollified_energy_check(
      snaps, snaps.size() - 1, snaps.size() - 1, [](double) { return 1.0; }, g,
      fft, true);
  CHECK(resid == 0.0);
}

TEST_CASE("nonlinear Taylor-Green run satisfies the inequality", "[mollified]") {
  const Grid g = build_grid(2, 64, kTwoPi);
  Fft fft(g);
  auto snaps = collect_snapshots(g, fft, true, 0.8, 2e-3, 25);  // every 0.05
  const double e0 =
      l2_norm_sq(snaps.front().u, g) + l2_norm_sq(snaps.front().B, g);

  // (s, t) = (0.2, 0.8)
  std::size_t is = 0, it = snaps.size() - 1;
  for (std::size_t i = 0; i < snaps.size(); ++i)
    if (std::abs(snaps[i].t - 0.2) < 1e-9) is = i;
  const double resid = mollified_energy_check(
      snaps, is, it, [](double k2) { return std::exp(-k2); }, g, fft, true);
  CHECK(resid <= 1e-4 * e0);
}

TEST_CASE("missing snapshots are rejected", "[mollified]") {
  const Grid g = build_grid(2, 16, kTwoPi);
  Fft fft(g);
  std::vector<MHDState> snaps;
  CHECK_THROWS_AS(mollified_energy_check(
                      snaps, 0, 0, [](double) { return 1.0; }, g, fft, true),
                  ConfigError);
}
