#include "stokeseg/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "stokeseg/analysis.hpp"
#include "stokeseg/reconstruction.hpp"
#include "stokeseg/report.hpp"
#include "stokeseg/solver.hpp"

namespace stokeseg {

namespace {

// Raised after CLI11 has already printed its help text.
struct HelpShown {};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  const char* c = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    throw ParseError("bad " + what + " value '" + s + "'");
  return v;
}

// A grid is a comma list whose items are numbers or inclusive ranges
// "first..last:step", e.g. "0.1..5:0.1".
std::vector<double> parse_grid(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split_commas(s)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number(item, what));
      continue;
    }
    const auto colon = item.find(':', dots + 2);
    if (colon == std::string::npos)
      throw ParseError("range in " + what + " needs a step: '" + item + "'");
    const double first = parse_number(item.substr(0, dots), what);
    const double last = parse_number(item.substr(dots + 2, colon - dots - 2), what);
    const double step = parse_number(item.substr(colon + 1), what);
    if (!(step > 0.0) || last < first)
      throw ParseError("range in " + what + " must ascend with a positive step");
    for (double v = first; v <= last + 0.5 * step; v += step) out.push_back(v);
  }
  if (out.empty()) throw ParseError(what + " grid is empty");
  return out;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  for (const std::string& item : split_commas(s)) {
    const double v = parse_number(item, "--levels");
    const int n = static_cast<int>(v);
    if (v != n || n < 1) throw ParseError("level '" + item + "' is not a positive integer");
    out.push_back(n);
  }
  if (out.empty()) throw ParseError("--levels list is empty");
  return out;
}

int parse_h(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos || s.substr(0, slash) != "1")
    throw ParseError("--h expects the form 1/n, got '" + s + "'");
  const double v = parse_number(s.substr(slash + 1), "--h");
  const int n = static_cast<int>(v);
  if (v != n || n < 1) throw ParseError("--h expects a positive integer n in 1/n");
  return n;
}

bool parameter_free(const std::string& method) {
  return method == "meg" || method == "pr-meg";
}

void reject_penalty_for(const std::string& method) {
  throw InvalidParameter(method == "meg" ? "mEG accepts no penalty parameter"
                                         : "PR-mEG accepts no penalty parameter");
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

void emit_outputs(const RunConfig& cfg, const std::vector<RunRecord>& recs, const char* csv_name,
                  const char* svg_name, const std::string& title, const std::string& xlabel,
                  double (*xval)(const RunRecord&)) {
  ensure_out_dir(cfg.out_dir);
  if (cfg.emit_csv) write_csv(join(cfg.out_dir, csv_name), recs);
  if (cfg.emit_svg) {
    PlotSeries u{"velocity error", {}}, p{"pressure error", {}};
    for (const RunRecord& r : recs) {
      u.points.push_back({xval(r), r.err.u_triple});
      p.points.push_back({xval(r), r.err.p_l2});
    }
    write_svg_plot(join(cfg.out_dir, svg_name), title, xlabel, "error", {u, p});
  }
}

int cmd_convergence(const RunConfig& cfg) {
  const ExactSolution ex = make_solution(cfg.problem, cfg.nu_grid[0]);
  const double rho = cfg.rho_grid.empty() ? 1.0 : cfg.rho_grid[0];
  const auto recs = convergence_study(ex, cfg.method, cfg.levels, rho);
  emit_outputs(cfg, recs, "convergence.csv", "convergence.svg",
               "refinement study (" + cfg.method + ", " + cfg.problem + ")", "h",
               [](const RunRecord& r) { return r.h; });
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const int level = cfg.levels[0];
  std::vector<RunRecord> recs;
  std::string xlabel;
  double (*xval)(const RunRecord&) = nullptr;
  if (cfg.nu_grid.size() > 1) {
    const double rho = cfg.rho_grid.empty() ? 1.0 : cfg.rho_grid[0];
    recs = robustness_sweep(cfg.problem, cfg.method, level, cfg.nu_grid, rho);
    xlabel = "nu";
    xval = [](const RunRecord& r) { return r.nu; };
  } else {
    const bool swept = !cfg.rho_m_grid.empty();
    const ExactSolution ex = make_solution(cfg.problem, cfg.nu_grid[0]);
    recs = penalty_sweep(ex, level, swept ? cfg.rho_m_grid : cfg.rho_grid, swept);
    xlabel = swept ? "rho_m" : "rho";
    xval = [](const RunRecord& r) { return r.rho; };
  }
  emit_outputs(cfg, recs, "sweep.csv", "sweep.svg",
               xlabel + " sweep (" + cfg.problem + ")", xlabel, xval);
  return 0;
}

int cmd_export_vtk(const RunConfig& cfg) {
  const ExactSolution ex = make_solution(cfg.problem, cfg.nu_grid[0]);
  SimplicialMesh mesh = ex.make_mesh(cfg.levels[0]);
  const EGSpace s(mesh);
  const WeakGradient wg = WeakGradient::build(s);

  SaddleSystem sys;
  Vector F;
  if (cfg.method == "eg") {
    sys = assemble_eg(s, ex.nu, cfg.rho_grid[0]);
    F = assemble_load(s, ex.f);
  } else if (cfg.method == "meg") {
    sys = assemble_meg(s, wg, ex.nu);
    F = assemble_load(s, ex.f);
  } else {
    sys = assemble_meg(s, wg, ex.nu);
    F = assemble_load_pr(build_reconstruction(s), ex.f);
  }
  const StokesSolution sol = solve_stokes(apply_dirichlet(sys, F, ex.g));

  ensure_out_dir(cfg.out_dir);
  write_vtk(join(cfg.out_dir, "solution.vtk"), wg, sol.u, sol.p);
  return 0;
}

int cmd_quality(const RunConfig& cfg) {
  const ExactSolution ex = make_solution(cfg.problem, 1.0);
  SimplicialMesh mesh = ex.make_mesh(cfg.levels[0]);

  int n_boundary = 0;
  for (const Facet& f : mesh.facets) n_boundary += f.on_boundary() ? 1 : 0;

  char buf[64];
  std::cout << "problem " << cfg.problem << "\n";
  std::cout << "vertices " << mesh.n_vertices() << "\n";
  std::cout << "cells " << mesh.n_cells() << "\n";
  std::cout << "facets " << mesh.n_facets() << " (" << n_boundary << " boundary)\n";
  std::snprintf(buf, sizeof(buf), "max_diameter %.6e\n", mesh.max_diameter());
  std::cout << buf;

  if (mesh.dim == 2) {
    const auto stats = [&buf](const char* tag, const std::vector<double>& q) {
      double lo = q[0], sum = 0.0;
      for (double v : q) {
        lo = std::min(lo, v);
        sum += v;
      }
      std::snprintf(buf, sizeof(buf), "%s quality min %.6e mean %.6e\n", tag, lo,
                    sum / static_cast<double>(q.size()));
      std::cout << buf;
    };
    stats("uniform", mesh_quality(mesh));
    perturb(mesh, 0.3, cfg.seed);
    stats("perturbed(0.3)", mesh_quality(mesh));
  }
  return 0;
}

void parse_emit(const std::string& arg, RunConfig& cfg) {
  cfg.emit_csv = cfg.emit_vtk = cfg.emit_svg = false;
  for (const std::string& token : split_commas(arg)) {
    if (token == "csv") cfg.emit_csv = true;
    else if (token == "vtk") cfg.emit_vtk = true;
    else if (token == "svg") cfg.emit_svg = true;
    else throw InvalidParameter("unknown --emit token '" + token + "'");
  }
}

// Everything that is not raw flag syntax: cross-flag rules, per-command
// requirements, and the penalty-parameter interface contract.
void validate(RunConfig& cfg, bool has_levels, bool has_h, bool has_emit) {
  if (cfg.command != "convergence" && cfg.command != "sweep" && cfg.command != "export-vtk" &&
      cfg.command != "quality")
    throw InvalidParameter("unknown command '" + cfg.command + "'");
  if (cfg.method != "eg" && cfg.method != "meg" && cfg.method != "pr-meg")
    throw InvalidParameter("unknown method '" + cfg.method + "'");
  if (has_levels && has_h) throw InvalidParameter("choose either --levels or --h, not both");
  if (cfg.levels.empty()) {
    if (cfg.problem.rfind("file:", 0) == 0)
      cfg.levels = {1};  // file meshes have one fixed resolution
    else if (cfg.command == "convergence")
      throw InvalidParameter("convergence needs --levels a,b,c or --h 1/n");
    else
      throw InvalidParameter(cfg.command + " needs a mesh size --h 1/n");
  }
  if (cfg.command != "convergence" && cfg.levels.size() > 1)
    throw InvalidParameter(cfg.command + " runs on a single mesh");

  const bool nu_is_grid = cfg.nu_grid.size() > 1;
  if (cfg.command == "quality") {
    if (has_emit) throw InvalidParameter("quality prints to stdout and writes no files");
    if (!cfg.rho_grid.empty() || !cfg.rho_m_grid.empty() || nu_is_grid)
      throw InvalidParameter("quality inspects the mesh only and takes no solver grids");
    return;
  }
  if (cfg.emit_vtk && cfg.command != "export-vtk")
    throw InvalidParameter("vtk output comes from the export-vtk command");
  if (cfg.command == "export-vtk" && (cfg.emit_csv || cfg.emit_svg))
    throw InvalidParameter("export-vtk writes solution.vtk only");

  if (!cfg.rho_m_grid.empty()) {
    if (cfg.command != "sweep")
      throw InvalidParameter("--rho-m drives the sweep command only");
    if (cfg.method != "meg")
      throw InvalidParameter("--rho-m sweeps the parameter-free method; pass --method meg");
  }
  if (!cfg.rho_grid.empty() && parameter_free(cfg.method)) reject_penalty_for(cfg.method);

  if (cfg.command == "sweep") {
    // Exactly one swept parameter. For eg a --rho of any length is the swept
    // grid unless the viscosity is the grid, in which case a single --rho is
    // the fixed penalty of every run.
    const bool rho_m_sweep = !cfg.rho_m_grid.empty();
    const bool rho_sweep = !rho_m_sweep && !nu_is_grid && !cfg.rho_grid.empty();
    if ((rho_m_sweep && nu_is_grid) || (nu_is_grid && cfg.rho_grid.size() > 1))
      throw InvalidParameter("sweep accepts a grid in only one parameter");
    if (!rho_m_sweep && !rho_sweep && !nu_is_grid)
      throw InvalidParameter("sweep needs a grid in one of --rho, --rho-m, --nu");
    if (rho_sweep && cfg.method != "eg")
      throw InvalidParameter("a --rho grid sweeps the penalty method; pass --method eg");
    if (cfg.method == "eg" && cfg.rho_grid.empty())
      throw InvalidParameter("eg needs --rho");
  } else {
    if (nu_is_grid)
      throw InvalidParameter(cfg.command + " takes a single --nu; viscosity grids run via sweep");
    if (cfg.method == "eg" && cfg.rho_grid.empty())
      throw InvalidParameter("eg needs --rho");
    if (cfg.rho_grid.size() > 1)
      throw InvalidParameter(cfg.command + " takes a single --rho; grids run via sweep");
  }
}

}  // namespace

RunConfig parse_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string levels_arg, h_arg, nu_arg, rho_arg, rho_m_arg, emit_arg;

  CLI::App app{"Enriched Galerkin Stokes experiments"};
  app.set_help_flag("--help", "print usage");  // frees -h, --h means the mesh size
  app.add_option("command", cfg.command,
                 "convergence | sweep | export-vtk | quality")
      ->required();
  app.add_option("--method", cfg.method, "eg | meg | pr-meg");
  app.add_option("--problem", cfg.problem, "vortex2d | cube3d | lshape | file:<path>");
  app.add_option("--levels", levels_arg, "refinement levels, e.g. 8,16,32");
  app.add_option("--h", h_arg, "single mesh size as 1/n");
  app.add_option("--nu", nu_arg, "viscosity; a comma list sweeps it");
  app.add_option("--rho", rho_arg, "penalty weight (eg); a grid sweeps it");
  app.add_option("--rho-m", rho_m_arg, "hypothetical stabilization weight grid (sweep, meg)");
  app.add_option("--seed", cfg.seed, "seed for the perturbed mesh of quality");
  app.add_option("--out", cfg.out_dir, "output directory (default .)");
  app.add_option("--emit", emit_arg, "outputs to write: csv,vtk,svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw HelpShown{};
  } catch (const CLI::ParseError& e) {
    throw InvalidParameter(e.what());
  }

  const bool has_levels = !levels_arg.empty();
  if (has_levels) cfg.levels = parse_levels(levels_arg);
  if (!h_arg.empty()) cfg.levels = {parse_h(h_arg)};
  if (!nu_arg.empty()) {
    cfg.nu_grid = parse_grid(nu_arg, "--nu");
    for (double nu : cfg.nu_grid)
      if (!(nu > 0.0)) throw InvalidParameter("viscosity must be positive");
  }
  if (!rho_arg.empty()) cfg.rho_grid = parse_grid(rho_arg, "--rho");
  if (!rho_m_arg.empty()) cfg.rho_m_grid = parse_grid(rho_m_arg, "--rho-m");
  if (!emit_arg.empty()) parse_emit(emit_arg, cfg);
  if (cfg.command == "export-vtk" && emit_arg.empty()) {
    cfg.emit_csv = false;
    cfg.emit_vtk = true;
  }

  validate(cfg, has_levels, !h_arg.empty(), !emit_arg.empty());
  return cfg;
}

int run_cli(int argc, const char* const* argv) {
  try {
    const RunConfig cfg = parse_cli(argc, argv);
    if (cfg.command == "convergence") return cmd_convergence(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "export-vtk") return cmd_export_vtk(cfg);
    return cmd_quality(cfg);
  } catch (const HelpShown&) {
    return 0;
  } catch (const InvalidParameter& e) {
    std::cerr << "stokeseg: " << e.what() << "\n";
    return 2;
  } catch (const InvalidPenalty& e) {
    std::cerr << "stokeseg: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "stokeseg: " << e.what() << "\n";
    return 2;
  } catch (const TopologyError& e) {
    std::cerr << "stokeseg: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedDegree& e) {
    std::cerr << "stokeseg: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "stokeseg: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace stokeseg
