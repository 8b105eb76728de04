#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "mhdlab/orchestrate.hpp"

using namespace mhdlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunConfig small_simulate(const fs::path& out) {
  RunConfig c;
  c.kind = ExperimentKind::simulate;
  c.out_dir = out.string();
  c.seed = 7;
  c.grid = {2, 32, kTwoPi};
  c.solver.dt = 5e-3;
  c.solver.T = 0.05;
  c.solver.record_every = 2;
  c.u_data.kind = GeneratorKind::random_solenoidal;
  c.u_data.k_lo = 1.0;
  c.u_data.k_hi = 3.0;
  c.u_data.norm = 0.5;
  c.B_data.kind = GeneratorKind::shear_mode;
  c.B_data.amplitude = 0.3;
  c.B_data.mode = 2;
  c.exp.q_list = {4.0};
  return c;
}

}  // namespace

TEST_CASE("repeated runs produce byte-identical CSVs", "[orchestrate]") {
  const fs::path base = fs::temp_directory_path() / "mhdlab_orch_det";
  fs::remove_all(base);
  OrchestrateResult r1 = orchestrate(small_simulate(base / "a"));
  OrchestrateResult r2 = orchestrate(small_simulate(base / "b"));
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(base / "a" / "diagnostics.csv") ==
        slurp(base / "b" / "diagnostics.csv"));
  // different seed changes the data
  RunConfig c = small_simulate(base / "c");
  c.seed = 8;
  orchestrate(c);
  CHECK(slurp(base / "a" / "diagnostics.csv") !=
        slurp(base / "c" / "diagnostics.csv"));
  fs::remove_all(base);
}

TEST_CASE("diagnostics CSV header matches the documented schema", "[orchestrate]") {
  const fs::path out = fs::temp_directory_path() / "mhdlab_orch_hdr";
  fs::remove_all(out);
  orchestrate(small_simulate(out));
  std::ifstream is(out / "diagnostics.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "t,E_u,E_B,D_u,D_B,diss_u_cum,diss_B_cum,low_u,high_u,low_B,high_B,"
        "amp_ratio,maxB,uq4,Bq4");
  fs::remove_all(out);
}

TEST_CASE("manifest lists outputs with checksums and echoes the config", "[orchestrate]") {
  const fs::path out = fs::temp_directory_path() / "mhdlab_orch_manifest";
  fs::remove_all(out);
  RunConfig c = small_simulate(out);
  orchestrate(c);

  nlohmann::json m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["experiment"] == "simulate");
  CHECK(m["verdict"] == "pass");
  REQUIRE(m.contains("outputs"));
  for (const auto& f : m["outputs"]) {
    const fs::path p = out / f["name"].get<std::string>();
    CHECK(fs::exists(p));
    CHECK(f["checksum_fnv1a64"] == orchestrate_detail::file_checksum(p));
  }
  // config echo round-trips to an equal RunConfig
  ConfigParse round = parse_config(m["config"].get<std::string>());
  REQUIRE(round.ok());
  CHECK(round.config == c);
  fs::remove_all(out);
}

TEST_CASE("nonuniform experiment writes one row per alpha", "[orchestrate]") {
  const fs::path out = fs::temp_directory_path() / "mhdlab_orch_nonuni";
  fs::remove_all(out);
  RunConfig c;
  c.kind = ExperimentKind::nonuniform;
  c.out_dir = out.string();
  c.grid = {2, 16, 4.0 * M_PI};
  c.solver.dt = 0.05;
  c.solver.T = 0.5;
  c.solver.nonlinear = false;
  c.u_data.kind = GeneratorKind::gaussian_bump;
  c.u_data.amplitude = 0.05;
  c.u_data.sigma = 1.0;
  c.B_data.kind = GeneratorKind::gaussian_bump;
  c.B_data.amplitude = 0.05;
  c.B_data.sigma = 1.0;
  c.exp.alphas = {0.5, 0.4, 0.25};
  c.exp.epsilon = 0.1;
  c.threads = 2;
  const OrchestrateResult res = orchestrate(c);
  CHECK(res.exit_code == 0);

  std::ifstream is(out / "nonuniform.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "alpha,linear_ratio,duhamel_bound,simulated_ratio,pass");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  CHECK(fs::exists(out / "prodi.csv"));
  fs::remove_all(out);
}

TEST_CASE("snapshot emission and round trip through orchestrate", "[orchestrate]") {
  const fs::path out = fs::temp_directory_path() / "mhdlab_orch_snap";
  fs::remove_all(out);
  RunConfig c = small_simulate(out);
  c.solver.snapshot_every = 3;
  orchestrate(c);
  REQUIRE(fs::exists(out / "state_0000.mhdsnap"));
  Grid g;
  MHDState s = read_snapshot((out / "state_0000.mhdsnap").string(), g);
  CHECK(g.points == 32);
  CHECK(s.t == 0.0);
  fs::remove_all(out);
}
