#include <cmath>

#include "catch_amalgamated.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/run.hpp"

using namespace mhdlab;

namespace {

MHDState single_mode_state(const Grid& g, int mx, int my, Complex val) {
  MHDState s;
  s.u = SpectralVectorField(2, g.size());
  s.B = SpectralVectorField(2, g.size());
  int idx[3];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.axis_indices(i, idx);
    if (g.mode(idx[0]) == mx && g.mode(idx[1]) == my)
      s.u.component(1)[i] = val;
  }
  hermitian_symmetrize(s.u, g);
  return s;
}

}  // namespace

TEST_CASE("energies of simple states", "[diagnostics]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);

  MHDState zero;
  zero.u = SpectralVectorField(2, g.size());
  zero.B = SpectralVectorField(2, g.size());
  auto [e0u, e0b] = energy(zero, g);
  CHECK(e0u == 0.0);
  CHECK(e0b == 0.0);

  // u = sin(x) e2 on [0, 2pi]^2: integral of sin^2 is half the box volume
  PhysicalVectorField p(2, g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    p.component(1)[i] = std::sin((i / 32) * g.dx());
  MHDState s;
  s.u = fft.forward(p);
  s.B = SpectralVectorField(2, g.size());
  auto [eu, eb] = energy(s, g);
  CHECK(eu == Catch::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
  CHECK(eb == 0.0);

  // spectral energy equals physical-space quadrature
  MHDState r;
  r.u = random_solenoidal(g, 3, 1.0, 8.0, 1.7);
  r.B = random_solenoidal(g, 4, 1.0, 8.0, 0.6);
  auto [ru, rb] = energy(r, g);
  CHECK(ru == Catch::Approx(physical_l2_norm_sq(fft.inverse(r.u), g)).epsilon(1e-10));
  CHECK(rb == Catch::Approx(physical_l2_norm_sq(fft.inverse(r.B), g)).epsilon(1e-10));
}

TEST_CASE("frequency split limits and bounds", "[diagnostics]") {
  const Grid g = build_grid(2, 32, kTwoPi);

  SECTION("t = 0 with the time-dependent weight") {
    MHDState s;
    s.t = 0.0;
    s.u = random_solenoidal(g, 5, 1.0, 6.0, 1.3);
    s.B = random_solenoidal(g, 6, 1.0, 6.0, 0.4);
    const SplitEnergies sp = frequency_split(s, g, SplitWeight::gaussian_t);
    CHECK(sp.low_u == Catch::Approx(l2_norm(s.u, g)).epsilon(1e-12));
    CHECK(sp.high_u == 0.0);
    CHECK(sp.low_B == Catch::Approx(l2_norm(s.B, g)).epsilon(1e-12));
    CHECK(sp.high_B == 0.0);
  }

  SECTION("single |k| = 1 mode with the fixed weight") {
    MHDState s = single_mode_state(g, 1, 0, Complex(0.0, -0.5));
    const double norm = l2_norm(s.u, g);
    const SplitEnergies sp = frequency_split(s, g, SplitWeight::gaussian_fixed);
    CHECK(sp.low_u == Catch::Approx(std::exp(-1.0) * norm).epsilon(1e-12));
    CHECK(sp.high_u == Catch::Approx((1.0 - std::exp(-1.0)) * norm).epsilon(1e-12));
  }

  SECTION("random field satisfies the splitting bounds") {
    MHDState s;
    s.t = 0.37;
    s.u = random_solenoidal(g, 7, 1.0, 9.0, 2.0);
    s.B = random_solenoidal(g, 8, 1.0, 9.0, 1.0);
    for (auto w : {SplitWeight::gaussian_t, SplitWeight::gaussian_fixed}) {
      const SplitEnergies sp = frequency_split(s, g, w);
      const double nu = l2_norm(s.u, g), nb = l2_norm(s.B, g);
      CHECK(sp.low_u <= nu * (1 + 1e-12));
      CHECK(sp.high_u <= nu * (1 + 1e-12));
      CHECK(sp.low_u + sp.high_u >= nu * (1 - 1e-12));
      CHECK(sp.low_u * sp.low_u + sp.high_u * sp.high_u <= 2 * nu * nu);
      CHECK(sp.low_B + sp.high_B >= nb * (1 - 1e-12));

      // independent direct summation over the lattice
      const double tau = w == SplitWeight::gaussian_t ? s.t : 1.0;
      double lo = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double phi = std::exp(-g.ksq[i] * tau);
        for (int c = 0; c < 2; ++c)
          lo += phi * phi * std::norm(s.u.component(c)[i]);
      }
      lo = std::sqrt(lo * std::pow(g.length, 2));
      CHECK(sp.low_u == Catch::Approx(lo).epsilon(1e-13));
    }
  }
}

TEST_CASE("amplitude bound ratio", "[diagnostics]") {
  const Grid g = build_grid(2, 32, kTwoPi);

  MHDState zero;
  zero.u = SpectralVectorField(2, g.size());
  zero.B = SpectralVectorField(2, g.size());
  CHECK(amplitude_bound_ratio(zero, g) == 0.0);

  MHDState s;
  s.u = random_solenoidal(g, 9, 1.0, 8.0, 1.0);
  s.B = SpectralVectorField(2, g.size());
  double prev = amplitude_bound_ratio(s, g);
  for (int i = 0; i < 5; ++i) {
    heat_multiply(s.u, g, 0.05);
    const double cur = amplitude_bound_ratio(s, g);
    CHECK(cur <= prev * (1 + 1e-12));
    prev = cur;
  }
}

TEST_CASE("splitting schedules satisfy E' = 2 E G^2", "[diagnostics]") {
  SplittingSchedule poly{SplittingSchedule::Variant::polynomial, 4.0};
  SplittingSchedule expo{SplittingSchedule::Variant::exponential, 0.5};

  auto [E0, G0] = splitting_schedule(0.0, poly);
  CHECK(E0 == Catch::Approx(1.0));
  CHECK(G0 == Catch::Approx(std::sqrt(2.0)));
  auto [E1, G1] = splitting_schedule(3.7, expo);
  CHECK(G1 == Catch::Approx(0.5));
  CHECK(E1 == Catch::Approx(std::exp(0.5 * 3.7)));

  for (const auto& sch : {poly, expo}) {
    for (double t : {0.5, 1.0, 2.0, 10.0, 50.0, 100.0}) {
      auto resid = [&](double h) {
        auto [Ep, Gp] = splitting_schedule(t + h, sch);
        auto [Em, Gm] = splitting_schedule(t - h, sch);
        auto [Ec, Gc] = splitting_schedule(t, sch);
        return std::abs((Ep - Em) / (2 * h) - 2.0 * Ec * Gc * Gc);
      };
      const double r1 = resid(1e-2), r2 = resid(5e-3);
      if (r1 > 1e-12) {
        const double order = std::log2(r1 / r2);
        CHECK(order > 1.7);  // second-order finite-difference residual
      }
    }
  }

  CHECK_THROWS_AS(
      splitting_schedule(1.0, {SplittingSchedule::Variant::polynomial, 3.0}),
      ConfigError);
  CHECK_THROWS_AS(
      splitting_schedule(1.0, {SplittingSchedule::Variant::exponential, 0.0}),
      ConfigError);
}

TEST_CASE("Lq norms and the Kato observable", "[diagnostics]") {
  const Grid g = build_grid(2, 32, kTwoPi);
  Fft fft(g);

  MHDState s;
  s.u = random_solenoidal(g, 11, 1.0, 6.0, 1.1);
  s.B = random_solenoidal(g, 12, 1.0, 6.0, 0.7);
  CHECK(lq_norm(s, g, fft, 2.0) ==
        Catch::Approx(std::sqrt(l2_norm_sq(s.u, g))).epsilon(1e-10));
  CHECK_THROWS_AS(lq_norm(s, g, fft, 1.5), ConfigError);

  // p = q gives weight one
  std::vector<DiagnosticsRecord> series(3);
  for (int i = 0; i < 3; ++i) {
    series[i].t = 0.5 * (i + 1);
    series[i].lq = {{2.0 + i, 1.0}};
  }
  auto obs = kato_observable(series, 2, 4.0, 4.0, 0);
  REQUIRE(obs.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(obs[i].second == Catch::Approx(3.0 + i));

  // heat flow of a single |k| = 1 mode, p = q = 2: e^{-t} ||u0||_2
  SolverConfig cfg;
  cfg.dt = 0.02;
  cfg.T = 0.5;
  cfg.nonlinear = false;
  cfg.record_every = 5;
  MHDState init = single_mode_state(g, 1, 0, Complex(0.0, -0.5));
  const double n0 = l2_norm(init.u, g);
  RecordOptions ropts;
  ropts.q_list = {2.0};
  RunResult rr = run(init, cfg, ropts, g, fft);
  auto heat_obs = kato_observable(rr.records, 2, 2.0, 2.0, 0);
  double prev = 1e300;
  for (const auto& [t, v] : heat_obs) {
    CHECK(v == Catch::Approx(std::exp(-t) * n0).epsilon(1e-8));
    CHECK(v < prev);
    prev = v;
  }

  // constant zero field maps to the zero observable
  std::vector<DiagnosticsRecord> zs(2);
  zs[0].t = 1.0;
  zs[1].t = 2.0;
  zs[0].lq = zs[1].lq = {{0.0, 0.0}};
  for (const auto& [t, v] : kato_observable(zs, 2, 2.0, 4.0, 0)) CHECK(v == 0.0);
}

TEST_CASE("energy balance residual needs records", "[diagnostics]") {
  std::vector<DiagnosticsRecord> empty;
  CHECK_THROWS_AS(energy_balance_residual(empty, 1.0), ConfigError);
}
