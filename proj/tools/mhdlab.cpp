#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mhdlab/mhdlab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral MHD decay-diagnostics harness"};
  std::string config_path;
  std::string out_dir;
  std::string seed_str;
  int threads = 0;
  app.add_option("config", config_path, "path to the experiment config")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides [run] out)");
  app.add_option("--seed", seed_str, "RNG seed (overrides [run] seed)");
  app.add_option("--threads", threads,
                 "worker threads for parameter sweeps (or MHDLAB_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 2;
  }
  std::ostringstream ss;
  ss << is.rdbuf();

  mhdlab::ConfigParse parsed = mhdlab::parse_config(ss.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors)
      std::cerr << config_path << ": " << e.str() << "\n";
    return 2;
  }

  mhdlab::RunConfig cfg = parsed.config;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!seed_str.empty()) {
    try {
      cfg.seed = std::stoull(seed_str);
    } catch (...) {
      std::cerr << "error: --seed expects an unsigned integer\n";
      return 2;
    }
  }
  if (threads > 0) {
    cfg.threads = threads;
  } else if (const char* env = std::getenv("MHDLAB_THREADS")) {
    try {
      cfg.threads = std::max(1, std::stoi(env));
    } catch (...) {
      std::cerr << "error: MHDLAB_THREADS expects an integer\n";
      return 2;
    }
  }

  const mhdlab::OrchestrateResult res = mhdlab::orchestrate(cfg);
  if (!res.message.empty()) std::cerr << res.message << "\n";
  std::cout << "outputs written to " << cfg.out_dir << "\n";
  return res.exit_code;
}
