#include "doctest.h"

#include "probent/cli.hpp"
#include "probent/scenarios.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace probent;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

const char* kHeisenberg = R"({
  "name": "heisenberg_00plus",
  "hamiltonian": {"preset": "heisenberg_chain", "g": 1.0},
  "initial_state": {"class": "bipartite_12", "a": 1.0, "b": 0.0, "probe_axis": [1, 0, 0]},
  "time_grid": {"t_start": 0.0, "t_end": 3.141592653589793, "steps": 16}
})";

}  // namespace

TEST_CASE("sweep writes CSV") {
  const fs::path cfg = write_temp("probent_cli_heis.json", kHeisenberg);
  const fs::path csv = fs::temp_directory_path() / "probent_cli_heis.csv";
  fs::remove(csv);
  const Run r = run({"sweep", "--config", cfg.string(), "--out", csv.string()});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(csv));
  CHECK(r.out.find("16 rows") != std::string::npos);

  const Run noncommuting_fastpath =
      run({"sweep", "--config", cfg.string(), "--out", csv.string(), "--fastpath", "on"});
  CHECK(noncommuting_fastpath.code == kExitConfig);
  CHECK(noncommuting_fastpath.err.find("commutator norm") != std::string::npos);

  const Run io = run({"sweep", "--config", cfg.string(), "--out", "/nonexistent/dir/x.csv"});
  CHECK(io.code == kExitIo);
  fs::remove(cfg);
  fs::remove(csv);
}

TEST_CASE("missing config file is a config error naming the path") {
  const Run r = run({"sweep", "--config", "/nonexistent/none.json", "--out", "/tmp/x.csv"});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("/nonexistent/none.json") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitConfig);
  CHECK(run({"bogus"}).code == kExitConfig);
  CHECK(run({"suite"}).code == kExitConfig);
  CHECK(run({"sweep", "--config", "x.json"}).code == kExitConfig);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"qnd-demo", "--gt", "-1"}).code == kExitConfig);
  CHECK(run({"qnd-demo", "--gt", "1", "--m", "2"}).code == kExitConfig);
}

TEST_CASE("suite exit codes") {
  const Run ok = run({"suite", "separable_stays_separable", "--trials", "100", "--seed", "3"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("100/100") != std::string::npos);
  const Run unknown = run({"suite", "no_such_suite"});
  CHECK(unknown.code == kExitConfig);
  const Run bad = run({"suite", "triple_overlap_bound", "--trials", "50", "--seed", "1"});
  CHECK(bad.code == kExitViolation);
  CHECK(bad.out.find("replay: probent suite triple_overlap_bound --trials 50 --seed 1") !=
        std::string::npos);
  CHECK(bad.out.find("\"hamiltonian\"") != std::string::npos);
  // replay reproduces the same report
  CHECK(run({"suite", "triple_overlap_bound", "--trials", "50", "--seed", "1"}).out == bad.out);
}

TEST_CASE("classify") {
  const Run qnd = run({"classify", "--preset", "qnd_zz"});
  CHECK(qnd.code == kExitOk);
  CHECK(qnd.out.rfind("commuting\n", 0) == 0);
  CHECK(qnd.out.find("(0.0000, 0.0000, 1.0000)") != std::string::npos);

  const Run heis = run({"classify", "--preset", "heisenberg_chain", "--g", "2"});
  CHECK(heis.out.rfind("noncommuting", 0) == 0);
  CHECK(heis.out.find("3 distinct eigenvalues") != std::string::npos);
  CHECK(heis.out.find("-4.000000  x2") != std::string::npos);
  CHECK(heis.out.find("2.000000  x4") != std::string::npos);
  CHECK(heis.out.find("0.000000  x2") != std::string::npos);

  const fs::path zero = write_temp("probent_cli_zero.json",
                                   R"({"hamiltonian": {"h13": {}, "h23": {}}})");
  const Run triv = run({"classify", "--config", zero.string()});
  CHECK(triv.code == kExitOk);
  CHECK(triv.out.rfind("commuting (trivially)", 0) == 0);
  fs::remove(zero);

  const fs::path broken = write_temp("probent_cli_broken.json", "{ not json");
  CHECK(run({"classify", "--config", broken.string()}).code == kExitConfig);
  fs::remove(broken);
  CHECK(run({"classify"}).code == kExitConfig);
}

TEST_CASE("qnd-demo") {
  const Run pi = run({"qnd-demo", "--m", "0"});
  CHECK(pi.code == kExitOk);
  CHECK(pi.out.find("conditional tangle (+x): 1.0000") != std::string::npos);
  CHECK(pi.out.find("+        0.5000") != std::string::npos);
  const Run zero = run({"qnd-demo", "--gt", "0"});
  CHECK(zero.out.find("conditional tangle (+x): 0.0000") != std::string::npos);
}

TEST_CASE("qnd-demo at gt = pi/2 agrees with a sweep at the same point") {
  const fs::path demo_csv = fs::temp_directory_path() / "probent_cli_qnd.csv";
  const std::string gt = "1.5707963267948966";
  CHECK(run({"qnd-demo", "--gt", gt, "--out", demo_csv.string()}).code == kExitOk);
  const fs::path cfg = write_temp("probent_cli_qnd.json", R"({
    "name": "qnd",
    "hamiltonian": {"preset": "qnd_zz", "g": 1.0},
    "initial_state": {"class": "fully_separable", "reference_axis": [1, 0, 0]},
    "time_grid": {"t_start": 0.0, "t_end": 3.141592653589793, "steps": 3},
    "measurement": {"basis_axis": [1, 0, 0]}
  })");
  const fs::path sweep_csv = fs::temp_directory_path() / "probent_cli_qnd_sweep.csv";
  CHECK(run({"sweep", "--config", cfg.string(), "--out", sweep_csv.string()}).code == kExitOk);
  std::ifstream a(demo_csv), b(sweep_csv);
  const CsvTable ta = parse_csv(a);
  const CsvTable tb = parse_csv(b);
  REQUIRE(ta.rows.size() == 1);
  REQUIRE(tb.rows.size() == 3);
  CHECK(ta.header == tb.header);
  for (std::size_t k = 0; k < ta.header.size(); ++k) {
    if (k == 0 || ta.rows[0][k].empty() || ta.rows[0][k] == "+" || ta.rows[0][k] == "-") continue;
    CHECK(std::stod(ta.rows[0][k]) == doctest::Approx(std::stod(tb.rows[1][k])).epsilon(1e-12));
  }
  fs::remove(demo_csv);
  fs::remove(sweep_csv);
  fs::remove(cfg);
}

TEST_CASE("periodicity command") {
  CHECK(run({"periodicity", "--k", "3", "--l", "5", "--trials", "20"}).code == kExitOk);
  CHECK(run({"periodicity", "--k", "2", "--l", "4"}).code == kExitConfig);
}
