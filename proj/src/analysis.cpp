#include "stokeseg/analysis.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>

#include "stokeseg/assembly.hpp"
#include "stokeseg/quadrature.hpp"
#include "stokeseg/reconstruction.hpp"

namespace stokeseg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ErrorNorms error_norms(const WeakGradient& wg, const ExactSolution& ex, const EGField& u_h,
                       const PressureField& p_h, double rho) {
  const EGSpace& s = *wg.space;
  const SimplicialMesh& mesh = *s.mesh;
  const QuadratureRule& cell_q = simplex_rule(mesh.dim, 6);
  const QuadratureRule& facet_q = facet_rule(mesh.dim, 4);

  double vol_weak = 0.0, vol_broken = 0.0, p_sq = 0.0;
  for (int t = 0; t < mesh.n_cells(); ++t) {
    const Mat3 gw = wg.of_field(u_h, t);
    const Mat3 gb = u_h.broken_gradient(t);
    const double pt = p_h.values[t];
    const double scale = mesh.cell_measure[t] / reference_measure(mesh.dim);
    for (std::size_t q = 0; q < cell_q.size(); ++q) {
      const Vec3 x = cell_point(mesh, t, cell_q.points[q]);
      const double w = scale * cell_q.weights[q];
      const Mat3 gu = ex.grad_u(x);
      vol_weak += w * (gu - gw).squaredNorm();
      vol_broken += w * (gu - gb).squaredNorm();
      const double dp = ex.p(x) - ex.p_mean - pt;
      p_sq += w * dp * dp;
    }
  }

  // Facet mismatch: interior jumps of u_h (the exact field is continuous) and
  // the defect of the full one-sided trace against g on the boundary.
  double jump_sq = 0.0;
  for (int fi = 0; fi < mesh.n_facets(); ++fi) {
    const Facet& fa = mesh.facets[fi];
    const double scale = fa.measure / reference_measure(mesh.dim - 1);
    double acc = 0.0;
    for (std::size_t q = 0; q < facet_q.size(); ++q) {
      const Vec3 x = facet_point(mesh, fi, facet_q.points[q]);
      Vec3 diff;
      if (fa.on_boundary()) {
        diff = ex.g(x) - u_h.eval(fa.cell_plus, x);
      } else {
        diff = u_h.eval(fa.cell_plus, x) - u_h.eval(fa.cell_minus, x);
      }
      acc += scale * facet_q.weights[q] * diff.squaredNorm();
    }
    jump_sq += acc / fa.h_e;
  }

  // Distance to the cell-average projection of p, both sides de-meaned.
  PressureField p0 = project_p0(s, ex.p);
  p0.remove_mean();
  double proj_sq = 0.0;
  for (int t = 0; t < mesh.n_cells(); ++t) {
    const double d = p0.values[t] - p_h.values[t];
    proj_sq += mesh.cell_measure[t] * d * d;
  }

  ErrorNorms out;
  out.u_triple = std::sqrt(vol_weak + jump_sq);
  out.u_energy = std::sqrt(vol_broken + rho * jump_sq);
  out.p_l2 = std::sqrt(p_sq);
  out.p_proj = std::sqrt(proj_sq);
  return out;
}

RunRecord run_single(const ExactSolution& ex, const std::string& method, int level,
                     const RunOptions& opts) {
  if (level < 1) throw InvalidParameter("Refinement level must be >= 1");
  const bool from_file = ex.name.rfind("file:", 0) == 0;
  const bool has_weight = method == "eg" || opts.swept_meg;

  RunRecord rec;
  rec.method = method;
  rec.nu = ex.nu;
  rec.rho = has_weight ? opts.rho : kNaN;
  rec.rate_u = rec.rate_p = rec.cond2 = kNaN;

  SimplicialMesh mesh = ex.make_mesh(level);
  rec.h = from_file ? mesh.max_diameter() : 1.0 / level;
  EGSpace s(mesh);
  WeakGradient wg = WeakGradient::build(s);

  const auto t_assemble = std::chrono::steady_clock::now();
  SaddleSystem sys;
  Vector F;
  if (method == "eg") {
    sys = assemble_eg(s, ex.nu, opts.rho);
    F = assemble_load(s, ex.f);
  } else if (method == "meg") {
    sys = opts.swept_meg ? assemble_meg_swept(s, wg, ex.nu, opts.rho)
                         : assemble_meg(s, wg, ex.nu);
    F = assemble_load(s, ex.f);
  } else if (method == "pr-meg") {
    sys = assemble_meg(s, wg, ex.nu);
    const Reconstruction r = build_reconstruction(s);
    F = assemble_load_pr(r, ex.f);
  } else {
    throw InvalidParameter("Unknown method '" + method + "'");
  }
  ReducedSystem rs = apply_dirichlet(sys, F, ex.g);
  rec.assemble_s = seconds_since(t_assemble);

  const auto t_solve = std::chrono::steady_clock::now();
  const StokesSolution sol = solve_stokes(rs);
  rec.solve_s = seconds_since(t_solve);

  rec.err = error_norms(wg, ex, sol.u, sol.p, has_weight ? opts.rho : 1.0);
  if (opts.with_cond) rec.cond2 = condition_number(build_augmented(rs));
  return rec;
}

std::vector<RunRecord> convergence_study(const ExactSolution& ex, const std::string& method,
                                         const std::vector<int>& levels, double rho,
                                         bool with_cond) {
  if (levels.empty()) throw InvalidParameter("Convergence study needs at least one level");
  RunOptions opts;
  opts.rho = rho;
  opts.with_cond = with_cond;
  std::vector<RunRecord> out;
  out.reserve(levels.size());
  for (int n : levels) out.push_back(run_single(ex, method, n, opts));
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i].rate_u = std::log2(out[i - 1].err.u_triple / out[i].err.u_triple);
    out[i].rate_p = std::log2(out[i - 1].err.p_l2 / out[i].err.p_l2);
  }
  return out;
}

std::vector<RunRecord> penalty_sweep(const ExactSolution& ex, int level,
                                     const std::vector<double>& grid, bool swept_meg,
                                     bool with_cond) {
  if (grid.empty()) throw InvalidParameter("Penalty sweep needs a nonempty weight grid");
  std::vector<RunRecord> out;
  out.reserve(grid.size());
  for (double w : grid) {
    RunOptions opts;
    opts.rho = w;
    opts.swept_meg = swept_meg;
    opts.with_cond = with_cond;
    out.push_back(run_single(ex, swept_meg ? "meg" : "eg", level, opts));
  }
  return out;
}

std::vector<RunRecord> robustness_sweep(const std::string& problem, const std::string& method,
                                        int level, const std::vector<double>& nu_grid,
                                        double rho) {
  if (nu_grid.empty()) throw InvalidParameter("Robustness sweep needs a nonempty nu grid");
  std::vector<RunRecord> out;
  out.reserve(nu_grid.size());
  RunOptions opts;
  opts.rho = rho;
  for (double nu : nu_grid) {
    const ExactSolution ex = make_solution(problem, nu);
    out.push_back(run_single(ex, method, level, opts));
  }
  return out;
}

double infsup_probe(const SimplicialMesh& mesh, int budget_dofs) {
  EGSpace s(mesh);
  if (s.n_velocity() > budget_dofs)
    throw BudgetExceeded("Inf-sup probe works densely; the velocity space is too large");
  const WeakGradient wg = WeakGradient::build(s);
  const SaddleSystem sys = assemble_meg(s, wg, 1.0);
  const VectorField zero = [](const Vec3&) { return Vec3::Zero(); };
  const ReducedSystem rs = apply_dirichlet(sys, Vector::Zero(s.n_velocity()), zero);

  // beta^2 = min over zero-mean q of (q^T B X^-1 B^T q) / (q^T M q) with
  // X the energy Gram matrix (the parameter-free form at nu = 1) and M the
  // diagonal pressure mass. The constant pressure is an exact null vector of
  // the numerator; a rank-one shift pushes it out of the way.
  const Eigen::MatrixXd X = Eigen::MatrixXd(rs.A);
  const Eigen::MatrixXd Bd = Eigen::MatrixXd(rs.B);
  const Eigen::MatrixXd S = Bd * Eigen::LDLT<Eigen::MatrixXd>(X).solve(Bd.transpose());

  const Vector dinv_half = rs.m.array().sqrt().inverse();
  Eigen::MatrixXd St = dinv_half.asDiagonal() * S * dinv_half.asDiagonal();
  Vector w = rs.m.array().sqrt();
  w /= w.norm();
  const double shift = St.trace() + 1.0;
  St += shift * w * w.transpose();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(St);
  if (es.info() != Eigen::Success)
    throw NonConvergence("Dense eigensolve of the inf-sup probe failed");
  return std::sqrt(std::max(es.eigenvalues()(0), 0.0));
}

}  // namespace stokeseg
