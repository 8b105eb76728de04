#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhdlab/config.hpp"
#include "mhdlab/csv.hpp"
#include "mhdlab/experiments.hpp"
#include "mhdlab/snapshot.hpp"

namespace mhdlab {

namespace orchestrate_detail {

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string file_checksum(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(ss.str())));
  return buf;
}

inline std::vector<std::string> diagnostics_header(const std::vector<double>& qs) {
  std::vector<std::string> h = {"t",      "E_u",   "E_B",    "D_u",
                                "D_B",    "diss_u_cum", "diss_B_cum", "low_u",
                                "high_u", "low_B", "high_B", "amp_ratio",
                                "maxB"};
  char buf[32];
  for (double q : qs) {
    std::snprintf(buf, sizeof buf, "uq%g", q);
    h.emplace_back(buf);
    std::snprintf(buf, sizeof buf, "Bq%g", q);
    h.emplace_back(buf);
  }
  return h;
}

inline void write_diagnostics_csv(const std::string& path,
                                  std::span<const DiagnosticsRecord> recs,
                                  const std::vector<double>& qs) {
  CsvWriter csv(path);
  csv.header(diagnostics_header(qs));
  std::vector<double> row;
  for (const auto& r : recs) {
    row = {r.t,     r.E_u,   r.E_B,   r.D_u,       r.D_B,  r.diss_u_cum,
           r.diss_B_cum, r.low_u, r.high_u, r.low_B, r.high_B, r.amp_ratio,
           r.max_B};
    for (const auto& [uq, bq] : r.lq) {
      row.push_back(uq);
      row.push_back(bq);
    }
    csv.row(row);
  }
}

inline void write_plot_script(const std::string& path, const std::string& csv_name,
                              const std::string& title) {
  std::ofstream os(path, std::ios::trunc);
  os << "# gnuplot script; run from this directory\n";
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set logscale y\n";
  os << "set xlabel 't'\n";
  os << "set ylabel 'energy'\n";
  os << "set title '" << title << "'\n";
  os << "plot '" << csv_name << "' using 1:2 with lines title 'E_u', \\\n";
  os << "     '" << csv_name << "' using 1:3 with lines title 'E_B'\n";
  os << "pause -1\n";
}

}  // namespace orchestrate_detail

struct OrchestrateResult {
  int exit_code = 0;  // 0 pass, 1 experiment assertion failed, 2 config error
  std::string message;
};

// Dispatches a validated RunConfig, writes CSV outputs, a gnuplot script and
// a manifest (config echo + checksums + wall time) into the output directory.
// Identical config + seed produce byte-identical CSVs.
inline OrchestrateResult orchestrate(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  namespace od = orchestrate_detail;
  using nlohmann::json;

  const auto t_start = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);

  json manifest;
  manifest["experiment"] = config_detail::to_string(cfg.kind);
  manifest["config"] = to_text(cfg);
  manifest["seed"] = cfg.seed;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  bool pass = true;
  std::string message;
  bool partial = false;

  try {
    const Grid g = build_grid(cfg.grid.n, cfg.grid.N, cfg.grid.L);

    switch (cfg.kind) {
      case ExperimentKind::simulate: {
        Fft fft(g);
        MHDState init;
        init.delta = cfg.solver.delta;
        init.u = make_field(cfg.u_data, g, fft, cfg.seed);
        init.B = make_field(cfg.B_data, g, fft, cfg.seed + 1);

        SolverConfig scfg;
        scfg.dt = cfg.solver.dt;
        scfg.T = cfg.solver.T;
        scfg.dealias = cfg.solver.dealias;
        scfg.scheme = cfg.solver.scheme;
        scfg.picard_iterations = cfg.solver.picard_iterations;
        scfg.record_every = cfg.solver.record_every;
        scfg.nonlinear = cfg.solver.nonlinear;
        RecordOptions ropts{cfg.exp.split_weight, cfg.exp.q_list};

        int snap_idx = 0;
        long rec_idx = -1;
        RecordCallback cb;
        if (cfg.solver.snapshot_every > 0) {
          cb = [&](const DiagnosticsRecord&, const MHDState& s) {
            ++rec_idx;
            if (rec_idx % cfg.solver.snapshot_every != 0) return;
            char name[40];
            std::snprintf(name, sizeof name, "state_%04d.mhdsnap", snap_idx++);
            write_snapshot((out / name).string(), s, g);
            outputs.push_back(name);
          };
        }
        RunResult rr = run(init, scfg, ropts, g, fft, cb);
        if (rr.resolution_warning)
          warnings.push_back("delta = 0 spectral tail monitor tripped; run may be under-resolved");
        od::write_diagnostics_csv((out / "diagnostics.csv").string(), rr.records,
                                  cfg.exp.q_list);
        outputs.push_back("diagnostics.csv");
        od::write_plot_script((out / "decay.gp").string(), "diagnostics.csv",
                              "energy decay");
        outputs.push_back("decay.gp");
        manifest["sup_max_abs_B"] = rr.sup_max_abs_B;
        break;
      }

      case ExperimentKind::nonuniform: {
        ScaledFamilyConfig ncfg;
        ncfg.dim = cfg.grid.n;
        ncfg.base_points = cfg.grid.N;
        ncfg.base_length = cfg.grid.L;
        ncfg.amplitude_u = cfg.u_data.amplitude;
        ncfg.amplitude_B = cfg.B_data.kind == GeneratorKind::none ? 0.0
                                                                  : cfg.B_data.amplitude;
        ncfg.sigma = cfg.u_data.sigma;
        ncfg.alphas = cfg.exp.alphas;
        ncfg.T = cfg.solver.T;
        ncfg.epsilon = cfg.exp.epsilon;
        ncfg.dt = cfg.solver.dt;
        ncfg.delta = cfg.solver.delta;
        ncfg.nonlinear = cfg.solver.nonlinear;
        ncfg.threads = cfg.threads;
        ncfg.policy = cfg.exp.box_policy;
        auto rows = nonuniform_decay_experiment(ncfg);

        CsvWriter csv((out / "nonuniform.csv").string());
        csv.header({"alpha", "linear_ratio", "duhamel_bound", "simulated_ratio", "pass"});
        for (const auto& r : rows)
          csv.raw_row({CsvWriter::num(r.alpha), CsvWriter::num(r.linear_ratio),
                       CsvWriter::num(r.duhamel_bound),
                       CsvWriter::num(r.simulated_ratio), r.pass ? "1" : "0"});
        outputs.push_back("nonuniform.csv");

        // Prodi companion report for the same runs
        double phi_base = 0.0;
        {
          const Grid base = build_grid(ncfg.dim, ncfg.base_points, ncfg.base_length);
          Fft bfft(base);
          SpectralVectorField ub = bfft.forward(sample_field(
              base, gaussian_bump(ncfg.dim, ncfg.amplitude_u, ncfg.sigma, base.length)));
          SpectralVectorField bb = bfft.forward(sample_field(
              base, gaussian_bump(ncfg.dim, ncfg.amplitude_B, ncfg.sigma, base.length)));
          leray_project(ub, base);
          leray_project(bb, base);
          phi_base = gradient_norm_sq(ub, base) + gradient_norm_sq(bb, base);
        }
        CsvWriter prodi((out / "prodi.csv").string());
        prodi.header({"alpha", "phi0", "phi0_over_base", "scaling_ok", "c_emp",
                      "sup_phi_over_phi0"});
        for (const auto& r : rows) {
          if (!r.error.empty()) continue;
          const ProdiReport rep =
              prodi_bound_check(r.records, r.alpha, ncfg.dim, phi_base);
          prodi.raw_row({CsvWriter::num(rep.alpha), CsvWriter::num(rep.phi0),
                         CsvWriter::num(rep.phi0_over_base), rep.scaling_ok ? "1" : "0",
                         CsvWriter::num(rep.c_emp),
                         CsvWriter::num(rep.sup_phi_over_phi0)});
        }
        outputs.push_back("prodi.csv");
        od::write_plot_script((out / "nonuniform.gp").string(), "nonuniform.csv",
                              "non-uniform decay");
        outputs.push_back("nonuniform.gp");

        for (const auto& r : rows) {
          if (!r.error.empty()) {
            warnings.push_back("alpha " + CsvWriter::num(r.alpha) + ": " + r.error);
            partial = true;
          }
        }
        // verdict: smallest alpha row carries the non-uniformity claim
        const auto& last = rows.back();
        pass = last.error.empty() &&
               last.linear_ratio - last.duhamel_bound >= 1.0 - ncfg.epsilon;
        for (const auto& r : rows)
          if (r.error.empty() &&
              std::abs(r.simulated_ratio - r.linear_ratio) > r.duhamel_bound)
            pass = false;
        if (!pass) message = "non-uniformity assertion failed";
        break;
      }

      case ExperimentKind::oscillation: {
        OscillationConfig ocfg;
        ocfg.dim = cfg.grid.n;
        ocfg.points = cfg.grid.N;
        ocfg.length = cfg.grid.L;
        ocfg.dt = cfg.solver.dt;
        ocfg.amplitude_u = cfg.u_data.amplitude;
        ocfg.sigma_u = cfg.u_data.sigma;
        ocfg.amplitude_B = cfg.B_data.amplitude;
        ocfg.sigma_B = cfg.B_data.sigma;
        ocfg.shear_B = cfg.B_data.kind == GeneratorKind::shear_mode;
        ocfg.shear_mode_index = cfg.B_data.mode;
        ocfg.chunk_T = cfg.exp.chunk_T;
        ocfg.T_max = cfg.exp.T_max;
        ocfg.saturation_tol = cfg.exp.saturation_tol;
        ocfg.plateau_fraction = cfg.exp.plateau_window;
        ocfg.record_every = cfg.solver.record_every;
        const OscillationReport rep = compensated_oscillation_experiment(ocfg);

        CsvWriter csv((out / "oscillation.csv").string());
        csv.header({"t", "E_u", "E_B"});
        for (const auto& r : rep.records) {
          const double row[3] = {r.t, r.E_u, r.E_B};
          csv.row(row);
        }
        outputs.push_back("oscillation.csv");
        CsvWriter sum((out / "oscillation_summary.csv").string());
        sum.header({"M", "plateau_spread", "u_final_fraction", "sup_maxB",
                    "T_final", "monotone", "saturated"});
        sum.raw_row({CsvWriter::num(rep.M), CsvWriter::num(rep.plateau_spread),
                     CsvWriter::num(rep.u_final_fraction),
                     CsvWriter::num(rep.sup_max_abs_B), CsvWriter::num(rep.T_final),
                     rep.monotone ? "1" : "0", rep.saturated ? "1" : "0"});
        outputs.push_back("oscillation_summary.csv");
        od::write_plot_script((out / "oscillation.gp").string(), "oscillation.csv",
                              "compensated-oscillation experiment");
        outputs.push_back("oscillation.gp");
        if (rep.resolution_warning)
          warnings.push_back("delta = 0 spectral tail monitor tripped");

        pass = rep.monotone && rep.M > 0.0 &&
               rep.plateau_spread <= 0.02 * rep.M && rep.u_final_fraction <= 0.1;
        if (!pass) message = "oscillation assertions failed";
        break;
      }

      case ExperimentKind::kato: {
        Fft fft(g);
        MHDState init;
        init.delta = cfg.solver.delta;
        init.u = make_field(cfg.u_data, g, fft, cfg.seed);
        init.B = make_field(cfg.B_data, g, fft, cfg.seed + 1);

        SolverConfig scfg;
        scfg.dt = cfg.solver.dt;
        scfg.T = cfg.solver.T;
        scfg.record_every = cfg.solver.record_every;
        RecordOptions ropts;
        ropts.split_weight = cfg.exp.split_weight;
        ropts.q_list = cfg.exp.q_list;
        std::size_t q_index = ropts.q_list.size();
        for (std::size_t i = 0; i < ropts.q_list.size(); ++i)
          if (ropts.q_list[i] == cfg.exp.kato_q) q_index = i;
        if (q_index == ropts.q_list.size()) {
          q_index = ropts.q_list.size();
          ropts.q_list.push_back(cfg.exp.kato_q);
        }
        RunResult rr = run(init, scfg, ropts, g, fft);
        od::write_diagnostics_csv((out / "diagnostics.csv").string(), rr.records,
                                  ropts.q_list);
        outputs.push_back("diagnostics.csv");

        const auto obs = kato_observable(rr.records, g.dim, cfg.exp.kato_p,
                                         cfg.exp.kato_q, q_index, 0.0);
        CsvWriter csv((out / "kato.csv").string());
        csv.header({"t", "weighted_norm"});
        double prev = -1.0;
        pass = true;
        for (const auto& [t, v] : obs) {
          const double row[2] = {t, v};
          csv.row(row);
          if (t >= cfg.exp.t_min) {
            if (prev >= 0.0 && v > prev * (1.0 + 1e-12)) pass = false;
            prev = v;
          }
        }
        outputs.push_back("kato.csv");
        od::write_plot_script((out / "kato.gp").string(), "kato.csv",
                              "Kato weighted decay");
        if (!pass) message = "kato weighted norm failed to be non-increasing";
        outputs.push_back("kato.gp");
        break;
      }

      case ExperimentKind::picard_validate: {
        Fft fft(g);
        SpectralVectorField u0 = make_field(cfg.u_data, g, fft, cfg.seed);
        SpectralVectorField B0 = make_field(cfg.B_data, g, fft, cfg.seed + 1);

        PicardOptions popts;
        popts.iterations = cfg.solver.picard_iterations;
        popts.nodes = cfg.exp.picard_nodes;
        popts.dealias = cfg.solver.dealias;
        PicardResult pr = picard_iterate(u0, B0, cfg.solver.delta, cfg.solver.T,
                                         popts, g, fft);

        MHDState ref;
        ref.delta = cfg.solver.delta;
        ref.u = u0;
        ref.B = B0;
        SolverConfig scfg;
        scfg.dt = cfg.solver.dt;
        scfg.T = cfg.solver.T;
        SimulationDriver drv(ref, scfg, RecordOptions{}, g, fft);
        drv.advance_to(cfg.solver.T);

        SpectralVectorField du = pr.at_final_time().u;
        for (std::size_t i = 0; i < du.data.size(); ++i)
          du.data[i] -= drv.state().u.data[i];
        const double diff = l2_norm(du, g);

        CsvWriter csv((out / "picard.csv").string());
        csv.header({"iteration", "update_norm"});
        for (std::size_t i = 0; i < pr.update_norms.size(); ++i) {
          const double row[2] = {static_cast<double>(i + 1), pr.update_norms[i]};
          csv.row(row);
        }
        outputs.push_back("picard.csv");
        CsvWriter sum((out / "picard_summary.csv").string());
        sum.header({"final_diff_l2", "tolerance"});
        const double row[2] = {diff, cfg.exp.picard_tol};
        sum.row(row);
        outputs.push_back("picard_summary.csv");
        {
          std::ofstream gp(out / "picard.gp", std::ios::trunc);
          gp << "set datafile separator ','\nset key autotitle columnhead\n"
             << "set logscale y\nset xlabel 'iteration'\n"
             << "plot 'picard.csv' using 1:2 with linespoints title 'update norm'\n"
             << "pause -1\n";
        }
        outputs.push_back("picard.gp");

        pass = diff <= cfg.exp.picard_tol;
        for (std::size_t i = 1; i + 1 < pr.update_norms.size(); ++i) {
          if (pr.update_norms[i] < 1e-15) break;
          if (pr.update_norms[i + 1] > 0.5 * pr.update_norms[i]) pass = false;
        }
        if (!pass) message = "picard validation failed";
        break;
      }
    }
  } catch (const ConfigError& e) {
    manifest["partial"] = true;
    manifest["error"] = e.what();
    std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
    return {2, e.what()};
  } catch (const std::exception& e) {
    manifest["partial"] = true;
    manifest["error"] = e.what();
    std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
    return {1, e.what()};
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  manifest["wall_seconds"] = wall;
  manifest["verdict"] = pass ? "pass" : "fail";
  manifest["partial"] = partial;
  manifest["warnings"] = warnings;
  json files = json::array();
  for (const auto& name : outputs)
    files.push_back({{"name", name},
                     {"checksum_fnv1a64", od::file_checksum(out / name)}});
  manifest["outputs"] = files;
  std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";

  if (!pass) return {1, message};
  return {0, ""};
}

}  // namespace mhdlab
