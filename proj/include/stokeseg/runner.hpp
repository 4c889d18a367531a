// Command-line driver behind tools/main.cpp, kept in the library so tests can
// inspect configuration parsing without spawning processes.
//
// Commands: convergence (refinement study), sweep (one mesh, a grid over the
// penalty weight, the hypothetical stabilization weight, or the viscosity),
// export-vtk (single solve, field dump), quality (mesh statistics).
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
#pragma once

#include <string>
#include <vector>

namespace stokeseg {

struct RunConfig {
  std::string command;
  std::string method = "meg";         // eg | meg | pr-meg
  std::string problem = "vortex2d";   // vortex2d | cube3d | lshape | file:<path>
  std::vector<int> levels;            // --levels a,b,c or the n of --h 1/n
  std::vector<double> nu_grid{1.0};   // more than one entry = viscosity sweep
  std::vector<double> rho_grid;       // penalty weights (eg only)
  std::vector<double> rho_m_grid;     // hypothetical weights of the
                                      // parameter-free form (sweep only)
  unsigned long seed = 0;
  std::string out_dir = ".";
  bool emit_csv = true;
  bool emit_vtk = false;
  bool emit_svg = false;
};

// Parses argv into a RunConfig; throws InvalidParameter / ParseError with a
// user-facing message on anything malformed (unknown flags included).
RunConfig parse_cli(int argc, const char* const* argv);

// Full driver: parse, dispatch, write outputs. Catches everything and maps it
// to the exit-code contract; error messages go to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace stokeseg
