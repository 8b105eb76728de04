#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mhdlab/fft.hpp"
#include "mhdlab/rhs.hpp"
#include "mhdlab/spectral_ops.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

// Per-time scalar observables.  lq holds one (u, B) norm pair per entry of
// the configured q list, in list order.
struct DiagnosticsRecord {
  double t = 0.0;
  double E_u = 0.0, E_B = 0.0;    // squared L2 norms
  double D_u = 0.0, D_B = 0.0;    // squared H1 seminorms
  double diss_u_cum = 0.0, diss_B_cum = 0.0;
  double low_u = 0.0, high_u = 0.0, low_B = 0.0, high_B = 0.0;
  double amp_ratio = 0.0;
  double max_B = 0.0;
  std::vector<std::pair<double, double>> lq;  // (||u||_q, ||B||_q)
};

inline std::pair<double, double> energy(const MHDState& s, const Grid& g) {
  return {l2_norm_sq(s.u, g), l2_norm_sq(s.B, g)};
}

// Max over records of |E_u + E_B + 2 int ||grad u||^2 + 2 delta int ||grad B||^2
// - initial energy| relative to the initial energy.
inline double energy_balance_residual(std::span<const DiagnosticsRecord> series,
                                      double delta) {
  if (series.empty()) throw ConfigError("energy balance needs a non-empty series");
  const double rhs = series.front().E_u + series.front().E_B;
  if (rhs == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& r : series) {
    const double lhs =
        r.E_u + r.E_B + 2.0 * r.diss_u_cum + 2.0 * delta * r.diss_B_cum;
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return worst;
}

enum class SplitWeight { gaussian_t, gaussian_fixed };

struct SplitEnergies {
  double low_u = 0.0, high_u = 0.0, low_B = 0.0, high_B = 0.0;
};

// Low/high frequency decomposition against phi(k) = e^{-|k|^2 t} (gaussian_t)
// or e^{-|k|^2} (gaussian_fixed): low = ||phi v_hat||_2, high = ||(1-phi) v_hat||_2.
inline SplitEnergies frequency_split(const MHDState& s, const Grid& g,
                                     SplitWeight w) {
  const double tau = w == SplitWeight::gaussian_t ? s.t : 1.0;
  const std::size_t n = g.size();
  double lo_u = 0.0, hi_u = 0.0, lo_b = 0.0, hi_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = std::exp(-g.ksq[i] * tau);
    const double one_m = 1.0 - phi;
    double mu = 0.0, mb = 0.0;
    for (int c = 0; c < g.dim; ++c) {
      mu += std::norm(s.u.component(c)[i]);
      mb += std::norm(s.B.component(c)[i]);
    }
    lo_u += phi * phi * mu;
    hi_u += one_m * one_m * mu;
    lo_b += phi * phi * mb;
    hi_b += one_m * one_m * mb;
  }
  const double vol = std::pow(g.length, g.dim);
  return {std::sqrt(vol * lo_u), std::sqrt(vol * hi_u), std::sqrt(vol * lo_b),
          std::sqrt(vol * hi_b)};
}

// max over k != 0 of |u_hat(k)| / (1 + 1/|k|), with coefficients put in
// continuum normalization (lattice coefficient times L^n approximates the
// whole-space Fourier integral).
inline double amplitude_bound_ratio(const MHDState& s, const Grid& g) {
  const std::size_t n = g.size();
  const double vol = std::pow(g.length, g.dim);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k2 = g.ksq[i];
    if (k2 == 0.0) continue;
    double m2 = 0.0;
    for (int c = 0; c < g.dim; ++c) m2 += std::norm(s.u.component(c)[i]);
    const double amp = vol * std::sqrt(m2);
    worst = std::max(worst, amp / (1.0 + 1.0 / std::sqrt(k2)));
  }
  return worst;
}

// Worst ratio of |u_hat(k,t)| against the integrated amplitude chain
//   |u_hat0(k)| + C (1 - e^{-|k|^2 t}) / |k|,   C = E_u(0) + E_B(0),
// in continuum normalization.  A value <= 1 means the bound holds.
inline double amplitude_chain_worst_ratio(const MHDState& s,
                                          const SpectralVectorField& u0,
                                          double energy0, const Grid& g) {
  const std::size_t n = g.size();
  const double vol = std::pow(g.length, g.dim);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k2 = g.ksq[i];
    if (k2 == 0.0) continue;
    const double k = std::sqrt(k2);
    double m2 = 0.0, m02 = 0.0;
    for (int c = 0; c < g.dim; ++c) {
      m2 += std::norm(s.u.component(c)[i]);
      m02 += std::norm(u0.component(c)[i]);
    }
    const double lhs = vol * std::sqrt(m2);
    const double rhs =
        vol * std::sqrt(m02) + energy0 * (1.0 - std::exp(-k2 * s.t)) / k;
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
  }
  return worst;
}

struct SplittingSchedule {
  enum class Variant { exponential, polynomial };
  Variant variant = Variant::polynomial;
  double param = 4.0;  // eps > 0 (exponential) or alpha_fs > 3 (polynomial)

  void validate() const {
    if (variant == Variant::exponential) {
      if (!(param > 0.0)) throw ConfigError("exponential schedule needs eps > 0");
    } else {
      if (!(param > 3.0)) throw ConfigError("polynomial schedule needs alpha > 3");
    }
  }
};

// Fourier-splitting pair (E, G): polynomial E = (1+t)^alpha, G = sqrt(alpha /
// (2(1+t))); exponential E = e^{eps t}, G = sqrt(eps/2).  Both satisfy
// E'(t) - 2 E(t) G^2(t) = 0 identically.
inline std::pair<double, double> splitting_schedule(double t,
                                                    const SplittingSchedule& sch) {
  sch.validate();
  if (t < 0.0) throw ConfigError("schedule evaluated at negative time");
  if (sch.variant == SplittingSchedule::Variant::exponential)
    return {std::exp(sch.param * t), std::sqrt(0.5 * sch.param)};
  return {std::pow(1.0 + t, sch.param),
          std::sqrt(0.5 * sch.param / (1.0 + t))};
}

inline double lq_norm(const MHDState& s, const Grid& g, Fft& fft, double q,
                      bool magnetic = false) {
  PhysicalVectorField p(g.dim, g.size());
  fft.inverse(magnetic ? s.B : s.u, p);
  return lq_norm(p, g, q);
}

// Kato-weighted norms t^{(n/p - n/q)/2} (||u||_q + ||B||_q) per record with
// t >= t_min, from a series whose q list contains q at index q_index.
inline std::vector<std::pair<double, double>> kato_observable(
    std::span<const DiagnosticsRecord> series, int dim, double p, double q,
    std::size_t q_index, double t_min = 0.0) {
  if (q < 2.0 || p < 1.0) throw ConfigError("kato observable needs p >= 1, q >= 2");
  const double expo = 0.5 * (dim / p - dim / q);
  std::vector<std::pair<double, double>> out;
  for (const auto& r : series) {
    if (r.t < t_min) continue;
    if (r.t == 0.0 && expo < 0.0) continue;
    if (q_index >= r.lq.size()) throw ConfigError("record lacks the requested Lq norm");
    const double w = expo == 0.0 ? 1.0 : std::pow(r.t, expo);
    out.emplace_back(r.t, w * (r.lq[q_index].first + r.lq[q_index].second));
  }
  return out;
}

// Mollified energy inequality (heat-propagated form): with phi a Fourier
// multiplier,
//   ||phi u_hat(t)||^2 <= ||e^{-|k|^2 (t-s)} phi u_hat(s)||^2
//     + 2 int_s^t |<u.grad u, e^{2 laplace (t-tau)} phi^2-mollified u>|
//     + 2 int_s^t |<B.grad B, e^{2 laplace (t-tau)} phi^2-mollified u>| dtau.
// Returns LHS - RHS with the time integral approximated by the trapezoid rule
// over the snapshots between indices is and it.  Negative values (up to
// quadrature error) mean the inequality holds.  When the run was linear-only
// the nonlinear pairings are identically absent.
inline double mollified_energy_check(std::span<const MHDState> snaps,
                                     std::size_t is, std::size_t it,
                                     const std::function<double(double)>& phi_of_ksq,
                                     const Grid& g, Fft& fft,
                                     bool nonlinear = true) {
  if (is > it || it >= snaps.size())
    throw ConfigError("mollified check needs snapshots with s <= t");
  const std::size_t n = g.size();
  const double vol = std::pow(g.length, g.dim);
  const double t_end = snaps[it].t;
  const double t_start = snaps[is].t;

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = phi_of_ksq(g.ksq[i]);

  double lhs = 0.0, heat_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mt = 0.0, ms = 0.0;
    for (int c = 0; c < g.dim; ++c) {
      mt += std::norm(snaps[it].u.component(c)[i]);
      ms += std::norm(snaps[is].u.component(c)[i]);
    }
    lhs += phi[i] * phi[i] * mt;
    const double prop = std::exp(-g.ksq[i] * (t_end - t_start));
    heat_term += prop * prop * phi[i] * phi[i] * ms;
  }
  lhs *= vol;
  heat_term *= vol;

  double integral = 0.0;
  if (nonlinear && it > is) {
    std::vector<double> pairing(it - is + 1, 0.0);
    PhysicalVectorField up(g.dim, n);
    std::vector<Complex> conv(n);
    std::vector<double> phys(n);
    for (std::size_t r = is; r <= it; ++r) {
      const MHDState& snap = snaps[r];
      const double tau = snap.t;
      fft.inverse(snap.u, up);
      PhysicalVectorField bp(g.dim, n);
      fft.inverse(snap.B, bp);
      double total = 0.0;
      for (const PhysicalVectorField* f : {&up, &bp}) {
        double inner = 0.0;
        for (int i = 0; i < g.dim; ++i) {
          // i-th component of (f.grad)f, spectral derivatives
          std::fill(phys.begin(), phys.end(), 0.0);
          for (int j = 0; j < g.dim; ++j) {
            const SpectralVectorField& sf = (f == &up) ? snap.u : snap.B;
            apply_derivative(sf.component(i), conv, g, j);
            std::vector<double> d(n);
            fft.inverse(conv, d);
            auto fj = f->component(j);
            for (std::size_t p = 0; p < n; ++p) phys[p] += fj[p] * d[p];
          }
          fft.forward(phys, conv);
          // pair against e^{-2 |k|^2 (t - tau)} phi^2 u_hat(tau)
          for (std::size_t p = 0; p < n; ++p) {
            const double w =
                std::exp(-2.0 * g.ksq[p] * (t_end - tau)) * phi[p] * phi[p];
            inner += (conv[p] * std::conj(snap.u.component(i)[p])).real() * w;
          }
        }
        total += std::abs(inner) * vol;
      }
      pairing[r - is] = 2.0 * total;
    }
    for (std::size_t r = is; r < it; ++r) {
      const double h = snaps[r + 1].t - snaps[r].t;
      integral += 0.5 * h * (pairing[r - is] + pairing[r - is + 1]);
    }
  }
  return lhs - (heat_term + integral);
}

}  // namespace mhdlab
