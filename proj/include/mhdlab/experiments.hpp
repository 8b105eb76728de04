#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mhdlab/quadrature.hpp"
#include "mhdlab/run.hpp"
#include "mhdlab/scaling.hpp"

namespace mhdlab {

// ---------------------------------------------------------------------------
// Non-uniform decay (scaled-data family)

struct ScaledFamilyConfig {
  int dim = 2;
  int base_points = 64;
  double base_length = 4.0 * M_PI;
  double amplitude_u = 0.05;
  double amplitude_B = 0.05;
  double sigma = 1.0;
  std::vector<double> alphas;  // distinct, descending, in (0, 1]
  double T = 1.0;
  double epsilon = 0.05;
  double dt = 0.01;
  double delta = 1.0;
  bool nonlinear = true;
  int threads = 1;
  BoxPolicy policy = BoxPolicy::growing;

  void validate() const {
    if (alphas.empty()) throw ConfigError("scaled family needs at least one alpha");
    double prev = 2.0;
    for (double a : alphas) {
      if (!(a > 0.0) || a > 1.0) throw ConfigError("alpha values must lie in (0, 1]");
      if (!(a < prev)) throw ConfigError("alpha values must be distinct and descending");
      prev = a;
    }
    if (!(T > 0.0)) throw ConfigError("horizon T must be positive");
    if (!(epsilon > 0.0) || epsilon >= 1.0) throw ConfigError("epsilon must lie in (0, 1)");
  }
};

struct NonuniformRow {
  double alpha = 0.0;
  double linear_ratio = 0.0;    // semi-analytic R^n heat ratio
  double duhamel_bound = 0.0;   // realized nonlinear correction, ratio units
  double simulated_ratio = 0.0; // ||u(T)||_2 / ||u0||_2 from the box run
  bool pass = false;
  std::string error;            // per-row failure, other rows still run
  std::vector<DiagnosticsRecord> records;
  double phi0 = 0.0;            // ||grad u||^2 + ||grad B||^2 at t = 0
};

// int_0^T (T-s)^{-1/2} g(s) ds with g piecewise linear on the record times;
// the weak singularity is integrated exactly against each linear piece.
inline double singular_duhamel_quadrature(std::span<const DiagnosticsRecord> recs,
                                          const std::function<double(const DiagnosticsRecord&)>& gfn,
                                          double T) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double s0 = recs[i].t, s1 = recs[i + 1].t;
    if (s0 >= T) break;
    const double g0 = gfn(recs[i]), g1 = gfn(recs[i + 1]);
    // tau = T - s on [ta, tb], g linear in tau
    const double tb = T - s0, ta = T - std::min(s1, T);
    const double h = s1 - s0;
    const double m0 = 2.0 * (std::sqrt(tb) - std::sqrt(ta));
    const double m1 = (2.0 / 3.0) * (std::pow(tb, 1.5) - std::pow(ta, 1.5));
    // g(tau) = g1 + (g0 - g1) * (tau - (T - s1)) / h
    const double ta_full = T - s1;
    total += g1 * m0 + (g0 - g1) / h * (m1 - ta_full * m0);
  }
  return total;
}

// One row of the sweep: semi-analytic linear ratio from the radial profile,
// a full nonlinear run under the growing-box policy, and the realized
// Duhamel bound  c_K * int (T-s)^{-1/2} * 2 (||u (x) u||_2 + ||B (x) B||_2) ds
// (the factor 2 absorbs the pressure bound ||p||_2 <= ||uu||_2 + ||BB||_2),
// normalized by ||u0||_2.  c_K = Gamma((n+1)/2)/Gamma(n/2) is the gradient
// heat kernel L1 constant ||grad K(tau)||_1 = c_K / sqrt(tau).
inline NonuniformRow nonuniform_row(const ScaledFamilyConfig& cfg,
                                    const RadialProfile& profile, double alpha) {
  NonuniformRow row;
  row.alpha = alpha;
  const double hs0 = heat_semigroup_norm(profile, alpha, 0.0);
  row.linear_ratio = heat_semigroup_norm(profile, alpha, cfg.T) / hs0;

  try {
    const Grid base = build_grid(cfg.dim, cfg.base_points, cfg.base_length);
    const Grid big = cfg.policy == BoxPolicy::growing ? scaled_grid(base, alpha) : base;
    Fft fft(big);

    const auto u_fn = gaussian_bump(cfg.dim, cfg.amplitude_u, cfg.sigma, cfg.base_length);
    const auto B_fn = gaussian_bump(cfg.dim, cfg.amplitude_B, cfg.sigma, cfg.base_length);

    MHDState init;
    init.delta = cfg.delta;
    if (cfg.policy == BoxPolicy::growing) {
      init.u = fft.forward(sample_field(
          big, scale_function(u_fn, alpha, cfg.base_length, big.length, cfg.dim)));
      init.B = fft.forward(sample_field(
          big, scale_function(B_fn, alpha, cfg.base_length, big.length, cfg.dim)));
    } else {
      const double support = 6.0 * cfg.sigma;
      init.u = fft.forward(scale_data_fixed_box(u_fn, alpha, big, support));
      init.B = fft.forward(scale_data_fixed_box(B_fn, alpha, big, support));
    }

    SolverConfig scfg;
    scfg.dt = cfg.dt;
    scfg.T = cfg.T;
    scfg.nonlinear = cfg.nonlinear;
    RecordOptions ropts;
    ropts.q_list = {4.0};
    RunResult rr = run(init, scfg, ropts, big, fft);

    const auto& recs = rr.records;
    row.records = recs;
    row.phi0 = recs.front().D_u + recs.front().D_B;
    const double u0_norm = std::sqrt(recs.front().E_u);
    row.simulated_ratio = std::sqrt(recs.back().E_u) / u0_norm;

    const double ck = std::tgamma(0.5 * (cfg.dim + 1)) / std::tgamma(0.5 * cfg.dim);
    const double integral = singular_duhamel_quadrature(
        recs,
        [](const DiagnosticsRecord& r) {
          const double uu = r.lq[0].first * r.lq[0].first;
          const double bb = r.lq[0].second * r.lq[0].second;
          return 2.0 * (uu + bb);
        },
        cfg.T);
    row.duhamel_bound = ck * integral / u0_norm;

    row.pass = (row.linear_ratio - row.duhamel_bound >= 1.0 - cfg.epsilon) &&
               std::abs(row.simulated_ratio - row.linear_ratio) <= row.duhamel_bound;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.pass = false;
  }
  return row;
}

inline std::vector<NonuniformRow> nonuniform_decay_experiment(
    const ScaledFamilyConfig& cfg) {
  cfg.validate();
  const RadialProfile profile =
      vortex_bump_radial_profile(cfg.dim, cfg.amplitude_u, cfg.sigma);

  std::vector<NonuniformRow> rows(cfg.alphas.size());
  const int workers = std::max(1, cfg.threads);
  std::vector<std::thread> pool;
  std::size_t next = 0;
  std::mutex mtx;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lk(mtx);
          if (next >= cfg.alphas.size()) return;
          i = next++;
        }
        rows[i] = nonuniform_row(cfg, profile, cfg.alphas[i]);
      }
    });
  for (auto& t : pool) t.join();
  return rows;
}

// ---------------------------------------------------------------------------
// Prodi gradient-energy bounds along a scaled-data run

struct ProdiReport {
  double alpha = 0.0;
  int dim = 2;                  // n = 2 reads c_emp, n = 3 reads sup_phi ratio
  double phi0 = 0.0;
  double phi0_over_base = 0.0;  // should equal alpha^2
  bool scaling_ok = false;      // |phi0/base - alpha^2| <= 1e-4
  double c_emp = 0.0;           // smallest C with phi(t) <= phi(0) e^{C int phi}
  double sup_phi_over_phi0 = 0.0;
};

inline ProdiReport prodi_bound_check(std::span<const DiagnosticsRecord> series,
                                     double alpha, int dim, double phi_base) {
  if (series.empty()) throw ConfigError("prodi check needs a non-empty series");
  for (const auto& r : series)
    if (!(r.D_u >= 0.0) || !(r.D_B >= 0.0))
      throw ConfigError("prodi check needs gradient norms in the series");

  ProdiReport rep;
  rep.alpha = alpha;
  rep.dim = dim;
  rep.phi0 = series.front().D_u + series.front().D_B;
  rep.phi0_over_base = phi_base > 0.0 ? rep.phi0 / phi_base : 0.0;
  rep.scaling_ok = std::abs(rep.phi0_over_base - alpha * alpha) <= 1e-4;

  double int_phi = 0.0;
  double sup_ratio = 0.0;
  double c_emp = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double phi = series[i].D_u + series[i].D_B;
    if (i > 0) {
      const double h = series[i].t - series[i - 1].t;
      const double prev = series[i - 1].D_u + series[i - 1].D_B;
      int_phi += 0.5 * h * (phi + prev);
    }
    if (rep.phi0 > 0.0) {
      sup_ratio = std::max(sup_ratio, phi / rep.phi0);
      if (phi > rep.phi0 && int_phi > 0.0)
        c_emp = std::max(c_emp, std::log(phi / rep.phi0) / int_phi);
    }
  }
  rep.sup_phi_over_phi0 = sup_ratio;
  rep.c_emp = c_emp;
  return rep;
}

// ---------------------------------------------------------------------------
// Compensated-oscillation experiment (delta = 0)

struct OscillationConfig {
  int dim = 2;
  int points = 256;
  double length = kTwoPi;
  double dt = 0.01;
  double amplitude_u = 0.25;
  double sigma_u = 0.5;
  double amplitude_B = 0.1;
  double sigma_B = 0.4;
  bool shear_B = false;  // replace the B bump by the exact steady shear mode
  int shear_mode_index = 2;
  double chunk_T = 2.0;
  double T_max = 200.0;
  double saturation_tol = 1e-3;  // increment of int ||grad u||^2 over [T/10, T]
  double plateau_fraction = 0.2;
  int record_every = 1;
};

struct OscillationReport {
  std::vector<DiagnosticsRecord> records;
  double T_final = 0.0;
  double M = 0.0;               // fitted ||B||_2 plateau
  double plateau_spread = 0.0;  // max - min of ||B||_2 over the window
  double u_final_fraction = 0.0;
  double sup_max_abs_B = 0.0;
  bool monotone = true;         // combined energy non-increasing (1e-8 slack)
  bool saturated = false;
  bool resolution_warning = false;
};

inline OscillationReport compensated_oscillation_experiment(
    const OscillationConfig& cfg) {
  const Grid g = build_grid(cfg.dim, cfg.points, cfg.length);
  Fft fft(g);

  MHDState init;
  init.delta = 0.0;
  init.u = fft.forward(sample_field(
      g, gaussian_bump(cfg.dim, cfg.amplitude_u, cfg.sigma_u, cfg.length)));
  init.B = fft.forward(sample_field(
      g, cfg.shear_B
             ? shear_mode(cfg.dim, cfg.amplitude_B, cfg.shear_mode_index, cfg.length)
             : gaussian_bump(cfg.dim, cfg.amplitude_B, cfg.sigma_B, cfg.length)));

  SolverConfig scfg;
  scfg.dt = cfg.dt;
  scfg.T = cfg.T_max;
  scfg.record_every = cfg.record_every;
  RecordOptions ropts;
  SimulationDriver drv(std::move(init), scfg, ropts, g, fft);

  OscillationReport rep;
  double T = 0.0;
  while (T < cfg.T_max - 1e-12) {
    T = std::min(T + cfg.chunk_T, cfg.T_max);
    drv.advance_to(T);
    const auto& recs = drv.records();
    // saturation: relative increment of the u dissipation over [T/10, T]
    const double target = 0.1 * T;
    double at_tenth = 0.0;
    for (const auto& r : recs)
      if (r.t <= target) at_tenth = r.diss_u_cum;
    const double total = recs.back().diss_u_cum;
    if (total > 0.0 && (total - at_tenth) / total < cfg.saturation_tol) {
      rep.saturated = true;
      break;
    }
  }

  rep.records = drv.records();
  rep.T_final = rep.records.back().t;
  rep.sup_max_abs_B = drv.sup_max_abs_B();
  rep.resolution_warning = drv.resolution_warning();

  const double e0 = rep.records.front().E_u + rep.records.front().E_B;
  double prev = e0;
  for (const auto& r : rep.records) {
    const double e = r.E_u + r.E_B;
    if (e > prev + 1e-8 * e0) rep.monotone = false;
    prev = e;
  }

  const std::size_t nrec = rep.records.size();
  const std::size_t w0 =
      nrec - std::max<std::size_t>(1, static_cast<std::size_t>(cfg.plateau_fraction * nrec));
  double sum = 0.0, lo = 1e300, hi = 0.0;
  for (std::size_t i = w0; i < nrec; ++i) {
    const double b = std::sqrt(rep.records[i].E_B);
    sum += b;
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  rep.M = sum / (nrec - w0);
  rep.plateau_spread = hi - lo;
  rep.u_final_fraction = rep.records.front().E_u > 0.0
                             ? std::sqrt(rep.records.back().E_u /
                                         rep.records.front().E_u)
                             : 0.0;
  return rep;
}

}  // namespace mhdlab
