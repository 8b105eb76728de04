#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/initial_data.hpp"
#include "mhdlab/run.hpp"
#include "mhdlab/scaling.hpp"

namespace mhdlab {

enum class ExperimentKind { simulate, nonuniform, oscillation, kato, picard_validate };

enum class GeneratorKind { none, taylor_green, gaussian_bump, shear_mode, random_solenoidal };

struct DataSpec {
  GeneratorKind kind = GeneratorKind::none;
  double amplitude = 1.0;
  double sigma = 1.0;
  int mode = 1;
  double k_lo = 1.0;
  double k_hi = 2.5;
  double norm = -1.0;  // target L2 for random data; <= 0 leaves it unnormalized

  bool operator==(const DataSpec&) const = default;
};

struct GridParams {
  int n = 2;
  int N = 64;
  double L = kTwoPi;

  bool operator==(const GridParams&) const = default;
};

struct SolverParams {
  double dt = 1e-3;
  double T = 1.0;
  double delta = 1.0;
  bool dealias = true;
  Scheme scheme = Scheme::ifrk4;
  int picard_iterations = 6;
  int record_every = 1;
  bool nonlinear = true;
  int snapshot_every = 0;  // records between snapshots, 0 = off

  bool operator==(const SolverParams&) const = default;
};

struct ExperimentParams {
  std::vector<double> alphas{0.4, 0.2, 0.1};
  double epsilon = 0.05;
  BoxPolicy box_policy = BoxPolicy::growing;
  std::vector<double> q_list;
  double kato_p = 2.0;
  double kato_q = 4.0;
  double t_min = 1.0;
  SplitWeight split_weight = SplitWeight::gaussian_t;
  double chunk_T = 2.0;
  double T_max = 200.0;
  double saturation_tol = 1e-3;
  double plateau_window = 0.2;
  int picard_nodes = 64;
  double picard_tol = 1e-4;

  bool operator==(const ExperimentParams&) const = default;
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  GridParams grid;
  SolverParams solver;
  DataSpec u_data;
  DataSpec B_data;
  ExperimentParams exp;

  bool operator==(const RunConfig&) const = default;
};

struct ParseIssue {
  int line = 0;  // 0 for cross-field checks
  std::string message;

  std::string str() const {
    return (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
           message;
  }
};

struct ConfigParse {
  RunConfig config;
  std::vector<ParseIssue> errors;
  bool ok() const { return errors.empty(); }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

inline bool parse_int(const std::string& s, long long& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

inline bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") { out = true; return true; }
  if (s == "false" || s == "0" || s == "no") { out = false; return true; }
  return false;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::nonuniform: return "nonuniform";
    case ExperimentKind::oscillation: return "oscillation";
    case ExperimentKind::kato: return "kato";
    case ExperimentKind::picard_validate: return "picard-validate";
  }
  return "?";
}

inline const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::none: return "none";
    case GeneratorKind::taylor_green: return "taylor-green";
    case GeneratorKind::gaussian_bump: return "gaussian-bump";
    case GeneratorKind::shear_mode: return "shear-mode";
    case GeneratorKind::random_solenoidal: return "random-solenoidal";
  }
  return "?";
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace config_detail

// key = value text with [section] headers, '#' comments.  Collects every
// error (with its line) instead of stopping at the first.
inline ConfigParse parse_config(const std::string& text) {
  using namespace config_detail;
  ConfigParse res;
  RunConfig& c = res.config;
  auto err = [&](int line, const std::string& m) {
    res.errors.push_back({line, m});
  };

  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::map<std::string, int> key_lines;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        err(lineno, "unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "grid" && section != "solver" &&
          section != "u" && section != "B" && section != "experiment")
        err(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      err(lineno, "expected key = value, got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      err(lineno, "empty key or value");
      continue;
    }
    key_lines[section + "." + key] = lineno;

    auto want_double = [&](double& dst, auto&&... check) {
      double v;
      if (!parse_double(val, v)) {
        err(lineno, "key '" + key + "' expects a number, got '" + val + "'");
        return;
      }
      bool ok = true;
      ((ok = ok && check(v)), ...);
      if (ok) dst = v;
    };
    auto positive = [&](const char* what) {
      return [&, what](double v) {
        if (v > 0.0) return true;
        err(lineno, std::string("key '") + what + "' must be positive");
        return false;
      };
    };
    auto want_int = [&](int& dst) {
      long long v;
      if (!parse_int(val, v))
        err(lineno, "key '" + key + "' expects an integer, got '" + val + "'");
      else
        dst = static_cast<int>(v);
    };
    auto want_bool = [&](bool& dst) {
      if (!parse_bool(val, dst))
        err(lineno, "key '" + key + "' expects true/false, got '" + val + "'");
    };
    auto want_list = [&](std::vector<double>& dst) {
      std::vector<double> out;
      for (const auto& item : split_list(val)) {
        double v;
        if (!parse_double(item, v)) {
          err(lineno, "key '" + key + "' has a non-numeric entry '" + item + "'");
          return;
        }
        out.push_back(v);
      }
      dst = std::move(out);
    };

    bool known = true;
    if (section == "run") {
      if (key == "experiment") {
        if (val == "simulate") c.kind = ExperimentKind::simulate;
        else if (val == "nonuniform") c.kind = ExperimentKind::nonuniform;
        else if (val == "oscillation") c.kind = ExperimentKind::oscillation;
        else if (val == "kato") c.kind = ExperimentKind::kato;
        else if (val == "picard-validate") c.kind = ExperimentKind::picard_validate;
        else err(lineno, "unknown experiment '" + val + "'");
      } else if (key == "out") {
        c.out_dir = val;
      } else if (key == "seed") {
        unsigned long long v;
        const char* b = val.data();
        auto [p, ec] = std::from_chars(b, b + val.size(), v);
        if (ec != std::errc() || p != b + val.size())
          err(lineno, "key 'seed' expects an unsigned integer");
        else
          c.seed = v;
      } else if (key == "threads") {
        want_int(c.threads);
      } else {
        known = false;
      }
    } else if (section == "grid") {
      if (key == "n") want_int(c.grid.n);
      else if (key == "N") want_int(c.grid.N);
      else if (key == "L") want_double(c.grid.L, positive("L"));
      else known = false;
    } else if (section == "solver") {
      if (key == "dt") want_double(c.solver.dt, positive("dt"));
      else if (key == "T") want_double(c.solver.T, [&](double v) {
        if (v >= 0.0) return true;
        err(lineno, "key 'T' must be nonnegative");
        return false;
      });
      else if (key == "delta") want_double(c.solver.delta, [&](double v) {
        if (v >= 0.0) return true;
        err(lineno, "key 'delta' must be nonnegative");
        return false;
      });
      else if (key == "dealias") want_bool(c.solver.dealias);
      else if (key == "nonlinear") want_bool(c.solver.nonlinear);
      else if (key == "scheme") {
        if (val == "if-rk4") c.solver.scheme = Scheme::ifrk4;
        else if (val == "picard") c.solver.scheme = Scheme::picard;
        else err(lineno, "unknown scheme '" + val + "'");
      } else if (key == "picard_iterations") want_int(c.solver.picard_iterations);
      else if (key == "record_every") want_int(c.solver.record_every);
      else if (key == "snapshot_every") want_int(c.solver.snapshot_every);
      else known = false;
    } else if (section == "u" || section == "B") {
      DataSpec& d = section == "u" ? c.u_data : c.B_data;
      if (key == "generator") {
        if (val == "none") d.kind = GeneratorKind::none;
        else if (val == "taylor-green") d.kind = GeneratorKind::taylor_green;
        else if (val == "gaussian-bump") d.kind = GeneratorKind::gaussian_bump;
        else if (val == "shear-mode") d.kind = GeneratorKind::shear_mode;
        else if (val == "random-solenoidal") d.kind = GeneratorKind::random_solenoidal;
        else err(lineno, "unknown generator '" + val + "'");
      } else if (key == "amplitude") want_double(d.amplitude);
      else if (key == "sigma") want_double(d.sigma, positive("sigma"));
      else if (key == "mode") want_int(d.mode);
      else if (key == "k_lo") want_double(d.k_lo, positive("k_lo"));
      else if (key == "k_hi") want_double(d.k_hi, positive("k_hi"));
      else if (key == "norm") want_double(d.norm);
      else known = false;
    } else if (section == "experiment") {
      if (key == "alpha") want_list(c.exp.alphas);
      else if (key == "epsilon") want_double(c.exp.epsilon);
      else if (key == "box_policy") {
        if (val == "growing") c.exp.box_policy = BoxPolicy::growing;
        else if (val == "fixed") c.exp.box_policy = BoxPolicy::fixed;
        else err(lineno, "unknown box_policy '" + val + "'");
      }
      else if (key == "q") want_list(c.exp.q_list);
      else if (key == "p") want_double(c.exp.kato_p, positive("p"));
      else if (key == "kato_q") want_double(c.exp.kato_q, positive("kato_q"));
      else if (key == "t_min") want_double(c.exp.t_min);
      else if (key == "split_weight") {
        if (val == "gaussian_t") c.exp.split_weight = SplitWeight::gaussian_t;
        else if (val == "gaussian_fixed") c.exp.split_weight = SplitWeight::gaussian_fixed;
        else err(lineno, "unknown split_weight '" + val + "'");
      } else if (key == "chunk_T") want_double(c.exp.chunk_T, positive("chunk_T"));
      else if (key == "T_max") want_double(c.exp.T_max, positive("T_max"));
      else if (key == "saturation_tol") want_double(c.exp.saturation_tol, positive("saturation_tol"));
      else if (key == "plateau_window") want_double(c.exp.plateau_window, positive("plateau_window"));
      else if (key == "picard_nodes") want_int(c.exp.picard_nodes);
      else if (key == "picard_tol") want_double(c.exp.picard_tol, positive("picard_tol"));
      else known = false;
    } else {
      // already reported the unknown section once
      continue;
    }
    if (!known) err(lineno, "unknown key '" + key + "' in section [" + section + "]");
  }

  // cross-field validation, attributed to the defining line when known
  auto line_of = [&](const std::string& k) {
    auto it = key_lines.find(k);
    return it == key_lines.end() ? 0 : it->second;
  };
  if (c.grid.n != 2 && c.grid.n != 3)
    err(line_of("grid.n"), "grid n must be 2 or 3");
  if (c.grid.N < 8 || c.grid.N % 2 != 0)
    err(line_of("grid.N"), "grid N must be even and >= 8");
  if (c.solver.picard_iterations < 1)
    err(line_of("solver.picard_iterations"), "picard_iterations must be >= 1");
  if (c.solver.record_every < 1)
    err(line_of("solver.record_every"), "record_every must be >= 1");
  if (c.solver.snapshot_every < 0)
    err(line_of("solver.snapshot_every"), "snapshot_every must be >= 0");
  if (c.threads < 1) err(line_of("run.threads"), "threads must be >= 1");
  for (double q : c.exp.q_list)
    if (q < 2.0) err(line_of("experiment.q"), "Lq entries must satisfy q >= 2");
  if (!(c.exp.epsilon > 0.0 && c.exp.epsilon < 1.0))
    err(line_of("experiment.epsilon"), "epsilon must lie in (0, 1)");
  if (c.kind == ExperimentKind::nonuniform) {
    double prev = 2.0;
    for (double a : c.exp.alphas) {
      if (!(a > 0.0 && a <= 1.0)) {
        err(line_of("experiment.alpha"), "alpha values must lie in (0, 1]");
        break;
      }
      if (!(a < prev)) {
        err(line_of("experiment.alpha"), "alpha values must be distinct and descending");
        break;
      }
      prev = a;
    }
    if (c.exp.alphas.empty())
      err(line_of("experiment.alpha"), "nonuniform needs a non-empty alpha list");
    if (c.u_data.kind != GeneratorKind::gaussian_bump)
      err(line_of("u.generator"),
          "nonuniform requires the gaussian-bump generator (semi-analytic profile)");
  }
  if (c.kind == ExperimentKind::kato || c.kind == ExperimentKind::picard_validate) {
    if (!(c.solver.delta > 0.0))
      err(line_of("solver.delta"), "this experiment requires delta > 0");
  }
  if (c.kind == ExperimentKind::oscillation && c.solver.delta != 0.0)
    err(line_of("solver.delta"), "the oscillation experiment requires delta = 0");
  if (c.exp.picard_nodes < 1)
    err(line_of("experiment.picard_nodes"), "picard_nodes must be >= 1");
  return res;
}

inline RunConfig parse_config_or_throw(const std::string& text) {
  ConfigParse p = parse_config(text);
  if (!p.ok()) {
    std::string all;
    for (const auto& e : p.errors) all += e.str() + "\n";
    throw ConfigError(all);
  }
  return p.config;
}

// Canonical serialization; parse_config(to_text(c)).config == c.
inline std::string to_text(const RunConfig& c) {
  using namespace config_detail;
  std::ostringstream os;
  os << "[run]\n";
  os << "experiment = " << to_string(c.kind) << "\n";
  os << "out = " << c.out_dir << "\n";
  os << "seed = " << c.seed << "\n";
  os << "threads = " << c.threads << "\n";
  os << "[grid]\n";
  os << "n = " << c.grid.n << "\nN = " << c.grid.N << "\nL = " << fmt(c.grid.L) << "\n";
  os << "[solver]\n";
  os << "dt = " << fmt(c.solver.dt) << "\nT = " << fmt(c.solver.T) << "\n";
  os << "delta = " << fmt(c.solver.delta) << "\n";
  os << "dealias = " << (c.solver.dealias ? "true" : "false") << "\n";
  os << "nonlinear = " << (c.solver.nonlinear ? "true" : "false") << "\n";
  os << "scheme = " << (c.solver.scheme == Scheme::ifrk4 ? "if-rk4" : "picard") << "\n";
  os << "picard_iterations = " << c.solver.picard_iterations << "\n";
  os << "record_every = " << c.solver.record_every << "\n";
  os << "snapshot_every = " << c.solver.snapshot_every << "\n";
  for (const auto* pair : {&c.u_data, &c.B_data}) {
    os << (pair == &c.u_data ? "[u]\n" : "[B]\n");
    os << "generator = " << to_string(pair->kind) << "\n";
    os << "amplitude = " << fmt(pair->amplitude) << "\n";
    os << "sigma = " << fmt(pair->sigma) << "\n";
    os << "mode = " << pair->mode << "\n";
    os << "k_lo = " << fmt(pair->k_lo) << "\nk_hi = " << fmt(pair->k_hi) << "\n";
    os << "norm = " << fmt(pair->norm) << "\n";
  }
  os << "[experiment]\n";
  os << "alpha = ";
  for (std::size_t i = 0; i < c.exp.alphas.size(); ++i)
    os << (i ? "," : "") << fmt(c.exp.alphas[i]);
  os << "\n";
  os << "epsilon = " << fmt(c.exp.epsilon) << "\n";
  os << "box_policy = "
     << (c.exp.box_policy == BoxPolicy::growing ? "growing" : "fixed") << "\n";
  if (!c.exp.q_list.empty()) {
    os << "q = ";
    for (std::size_t i = 0; i < c.exp.q_list.size(); ++i)
      os << (i ? "," : "") << fmt(c.exp.q_list[i]);
    os << "\n";
  }
  os << "p = " << fmt(c.exp.kato_p) << "\n";
  os << "kato_q = " << fmt(c.exp.kato_q) << "\n";
  os << "t_min = " << fmt(c.exp.t_min) << "\n";
  os << "split_weight = "
     << (c.exp.split_weight == SplitWeight::gaussian_t ? "gaussian_t" : "gaussian_fixed")
     << "\n";
  os << "chunk_T = " << fmt(c.exp.chunk_T) << "\n";
  os << "T_max = " << fmt(c.exp.T_max) << "\n";
  os << "saturation_tol = " << fmt(c.exp.saturation_tol) << "\n";
  os << "plateau_window = " << fmt(c.exp.plateau_window) << "\n";
  os << "picard_nodes = " << c.exp.picard_nodes << "\n";
  os << "picard_tol = " << fmt(c.exp.picard_tol) << "\n";
  return os.str();
}

// Builds the spectral field a DataSpec describes: sampled generators are
// transformed, projected and mean-zeroed; random data is spectral directly.
inline SpectralVectorField make_field(const DataSpec& d, const Grid& g, Fft& fft,
                                      std::uint64_t seed) {
  SpectralVectorField f(g.dim, g.size());
  switch (d.kind) {
    case GeneratorKind::none:
      return f;
    case GeneratorKind::taylor_green:
      f = fft.forward(sample_field(g, taylor_green(g.dim, d.amplitude, d.mode, g.length)));
      break;
    case GeneratorKind::gaussian_bump:
      f = fft.forward(sample_field(g, gaussian_bump(g.dim, d.amplitude, d.sigma, g.length)));
      break;
    case GeneratorKind::shear_mode:
      f = fft.forward(sample_field(g, shear_mode(g.dim, d.amplitude, d.mode, g.length)));
      break;
    case GeneratorKind::random_solenoidal:
      return random_solenoidal(g, seed, d.k_lo, d.k_hi, d.norm > 0 ? d.norm : d.amplitude);
  }
  leray_project(f, g);
  zero_mean(f);
  if (d.norm > 0.0) {
    const double cur = l2_norm(f, g);
    if (cur > 0.0)
      for (Complex& z : f.data) z *= d.norm / cur;
  }
  return f;
}

}  // namespace mhdlab
