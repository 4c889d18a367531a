// Black-box tests of the stokeseg binary: exit codes, stderr messages, and
// the on-disk outputs. The binary path comes in through STOKESEG_CLI_PATH.
#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory per call so runs cannot see each other's files.
std::string fresh_dir() {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("stokeseg_cli_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

CliResult run_cli(const std::string& args, const std::string& dir) {
  const std::string errfile = dir + "/stderr.txt";
  const std::string cmd = std::string(STOKESEG_CLI_PATH) + " " + args + " 2>" + errfile;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(errfile);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

// Everything before the timing columns, which are wall-clock and never
// reproducible. The schema ends in ...,cond2,assemble_s,solve_s.
std::string drop_timings(const std::string& line) {
  auto cut = line.rfind(',');
  cut = line.rfind(',', cut - 1);
  return line.substr(0, cut);
}

}  // namespace

TEST_CASE("cli: configuration errors exit 2 with a message on stderr") {
  const std::string dir = fresh_dir();
  struct Case {
    const char* args;
    const char* needle;
  };
  const Case cases[] = {
      {"convergence --method meg --rho 3 --problem vortex2d --levels 4",
       "mEG accepts no penalty parameter"},
      {"convergence --method pr-meg --rho 3 --problem vortex2d --levels 4",
       "PR-mEG accepts no penalty parameter"},
      {"convergence --method eg --problem vortex2d --levels 4", "--rho"},
      {"sweep --method meg --problem vortex2d --h 1/8", "needs a grid"},
      {"sweep --method meg --problem vortex2d --h 1/8 --rho-m 1,2 --nu 1e-2,1e-3",
       "only one parameter"},
      {"convergence --method meg --problem vortex2d --levels 4 --badflag 3",
       "--badflag"},
      {"convergence --method meg --problem vortex2d", "--levels"},
      {"convergence --method meg --problem vortex2d --levels 4 --h 1/4", ""},
      {"convergence --method p2p1 --problem vortex2d --levels 4", "method"},
      {"frobnicate --method meg --problem vortex2d --levels 4", "frobnicate"},
      {"convergence --method meg --problem vortex2d --levels 4 --nu -1", ""},
      {"quality --problem vortex2d --h 1/4 --emit csv", "stdout"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.args);
    const CliResult r = run_cli(c.args + (" --out " + dir), dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("stokeseg:") != std::string::npos);
    if (*c.needle) CHECK(r.err.find(c.needle) != std::string::npos);
  }

  CHECK(run_cli("--help", dir).exit_code == 0);
}

TEST_CASE("cli: convergence writes the pinned csv schema, reproducibly") {
  const std::string args =
      "convergence --method eg --rho 2 --problem vortex2d --levels 4,8";
  const std::string d1 = fresh_dir(), d2 = fresh_dir();
  REQUIRE(run_cli(args + " --out " + d1, d1).exit_code == 0);
  REQUIRE(run_cli(args + " --out " + d2, d2).exit_code == 0);

  const auto a = lines_of(slurp(d1 + "/convergence.csv"));
  const auto b = lines_of(slurp(d2 + "/convergence.csv"));
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  CHECK(a[0] ==
        "method,h,nu,rho,err_u_triple,rate_u,err_p_l2,rate_p,err_p_proj,"
        "cond2,assemble_s,solve_s");
  // Byte-identical apart from the two timing columns.
  for (size_t i = 0; i < a.size(); ++i) CHECK(drop_timings(a[i]) == drop_timings(b[i]));
  CHECK(a[1].substr(0, 3) == "eg,");
  // Second level halves h and carries a rate where the first has nan.
  CHECK(a[1].find(",nan,") != std::string::npos);
  CHECK(a[2].find("1.250000e-01") != std::string::npos);
}

TEST_CASE("cli: sweep fills the condition column") {
  const std::string dir = fresh_dir();
  const CliResult r = run_cli(
      "sweep --method eg --problem vortex2d --h 1/8 --rho 2,5 --out " + dir, dir);
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(slurp(dir + "/sweep.csv"));
  REQUIRE(rows.size() == 3);
  for (size_t i = 1; i < rows.size(); ++i) {
    // cond2 sits in column 10 of 12 and must be a finite positive number here.
    std::istringstream ss(rows[i]);
    std::string field;
    for (int k = 0; k < 10; ++k) std::getline(ss, field, ',');
    CHECK(std::stod(field) > 1.0);
  }
}

TEST_CASE("cli: export-vtk writes a parsable grid with divergence-free cells") {
  const std::string dir = fresh_dir();
  const CliResult r = run_cli(
      "export-vtk --method meg --problem vortex2d --h 1/16 --out " + dir, dir);
  REQUIRE(r.exit_code == 0);

  std::ifstream vtk(dir + "/solution.vtk");
  REQUIRE(vtk.good());
  int n_points = 0, n_cells = 0;
  double max_div = 0.0;
  std::string tok;
  while (vtk >> tok) {
    if (tok == "POINTS") {
      vtk >> n_points;
    } else if (tok == "CELLS") {
      vtk >> n_cells;
    } else if (tok == "weak_div_u") {
      vtk >> tok >> tok;  // "double 1"
      vtk >> tok >> tok;  // "LOOKUP_TABLE default"
      for (int i = 0; i < n_cells; ++i) {
        double v;
        REQUIRE((vtk >> v));
        max_div = std::max(max_div, std::abs(v));
      }
    }
  }
  CHECK(n_points == 17 * 17);
  CHECK(n_cells == 512);
  // The discrete incompressibility constraint holds cell by cell.
  CHECK(max_div <= 1e-9);
}

TEST_CASE("cli: quality reports mesh statistics on stdout") {
  const std::string dir = fresh_dir();
  const std::string outfile = dir + "/stdout.txt";
  const std::string cmd = std::string(STOKESEG_CLI_PATH) +
                          " quality --problem vortex2d --h 1/8 --seed 7 >" +
                          outfile + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  const std::string text = slurp(outfile);
  CHECK(text.find("vertices 81") != std::string::npos);
  CHECK(text.find("cells 128") != std::string::npos);
  CHECK(text.find("uniform quality min") != std::string::npos);
  CHECK(text.find("perturbed(0.3) quality min") != std::string::npos);
  // No files appear: the command prints and leaves the directory alone.
  CHECK(std::filesystem::exists(dir + "/convergence.csv") == false);
  CHECK(std::filesystem::exists(dir + "/sweep.csv") == false);
}
