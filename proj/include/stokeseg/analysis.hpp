// Error measurement and the experiment drivers behind the CLI.
//
// A "run" is one assemble+solve on one mesh; studies string runs together and
// fill in convergence rates. All error integrals use degree-6 cell rules and
// degree-4 facet rules; entries that do not apply to a run (rates on the
// coarsest level, rho for the parameter-free methods, skipped condition
// numbers) are NaN and the report writer prints them as nan.
#pragma once

#include <string>
#include <vector>

#include "stokeseg/exact_solutions.hpp"
#include "stokeseg/solver.hpp"
#include "stokeseg/weakcalc.hpp"

namespace stokeseg {

struct ErrorNorms {
  double u_triple = 0.0;  // weak-gradient volume part + h^-1 facet mismatch
  double u_energy = 0.0;  // broken gradient + rho-weighted facet mismatch
  double p_l2 = 0.0;
  double p_proj = 0.0;    // against the cell-average projection of p
};

// Norms of the error against an analytic solution. The facet mismatch uses
// the full one-sided trace on the boundary, measured against ex.g; `rho`
// only weights the jump part of u_energy (pass 1 for the parameter-free
// forms). Pressure errors compare in the zero-mean space.
ErrorNorms error_norms(const WeakGradient& wg, const ExactSolution& ex, const EGField& u_h,
                       const PressureField& p_h, double rho = 1.0);

struct RunRecord {
  std::string method;  // eg | meg | pr-meg
  double h = 0.0;      // nominal 1/n for generated meshes, max diameter for files
  double nu = 1.0;
  double rho = 0.0;    // NaN when the method takes no penalty weight
  ErrorNorms err;
  double rate_u = 0.0;  // log2 of the error drop from the previous level
  double rate_p = 0.0;
  double cond2 = 0.0;   // 2-norm condition estimate of the bordered matrix
  double assemble_s = 0.0;
  double solve_s = 0.0;
};

struct RunOptions {
  double rho = 1.0;          // EG penalty weight
  bool swept_meg = false;    // reuse rho as the hypothetical weight of the
                             // parameter-free form (sweep experiments only)
  bool with_cond = false;    // estimate cond2 (needs an extra factorization)
};

// One assemble+solve of `method` on ex.make_mesh(level), errors included.
RunRecord run_single(const ExactSolution& ex, const std::string& method, int level,
                     const RunOptions& opts = {});

// Runs the given levels in order and fills rate_u / rate_p between
// consecutive rows as log2(err_coarse / err_fine). Needs >= 1 level;
// rates want >= 2.
std::vector<RunRecord> convergence_study(const ExactSolution& ex, const std::string& method,
                                         const std::vector<int>& levels, double rho = 1.0,
                                         bool with_cond = false);

// Fixed mesh, one row per weight in `grid`. swept_meg false sweeps the
// penalty form, true the hypothetical weight of the parameter-free form.
std::vector<RunRecord> penalty_sweep(const ExactSolution& ex, int level,
                                     const std::vector<double>& grid, bool swept_meg,
                                     bool with_cond = true);

// Fixed mesh, one row per viscosity; the exact solution (and with it f) is
// rebuilt per value so the forcing tracks nu.
std::vector<RunRecord> robustness_sweep(const std::string& problem, const std::string& method,
                                        int level, const std::vector<double>& nu_grid,
                                        double rho = 1.0);

// Discrete inf-sup constant of the divergence coupling on this mesh:
// smallest generalized singular value of B restricted to zero-mean pressures,
// with velocities measured in the energy norm of the parameter-free form and
// pressures in L2. Dense solve; throws BudgetExceeded when the velocity
// space exceeds `budget_dofs`.
double infsup_probe(const SimplicialMesh& mesh, int budget_dofs = 10000);

}  // namespace stokeseg
