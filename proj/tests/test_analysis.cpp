#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "stokeseg/analysis.hpp"
#include "stokeseg/assembly.hpp"
#include "stokeseg/exact_solutions.hpp"
#include "stokeseg/quadrature.hpp"
#include "support.hpp"

using namespace stokeseg;

namespace {

// Random interior point of the problem domain, away from the lines the
// finite-difference probes must not straddle (the boundary, and y = 0 where
// the L-shape pressure kinks).
Vec3 domain_point(const ExactSolution& ex, std::mt19937& rng) {
  std::uniform_real_distribution<double> box(0.05, 0.95);
  if (ex.name != "lshape") {
    Vec3 x = Vec3::Zero();
    for (int c = 0; c < ex.dim; ++c) x[c] = box(rng);
    return x;
  }
  std::uniform_real_distribution<double> wide(-0.95, 0.95);
  for (;;) {
    const double x = wide(rng), y = wide(rng);
    if ((x <= -0.05 || y >= 0.05) && std::abs(y) >= 0.05) return Vec3{x, y, 0.0};
  }
}

Mat3 num_jacobian(const VectorField& u, int dim, const Vec3& x, double h) {
  Mat3 g = Mat3::Zero();
  for (int c = 0; c < dim; ++c) {
    Vec3 xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    g.col(c) = (u(xp) - u(xm)) / (2.0 * h);
  }
  return g;
}

Vec3 num_momentum(const ExactSolution& ex, const Vec3& x, double h) {
  Vec3 lap = Vec3::Zero(), grad_p = Vec3::Zero();
  const Vec3 u0 = ex.u(x);
  for (int c = 0; c < ex.dim; ++c) {
    Vec3 xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    lap += (ex.u(xp) - 2.0 * u0 + ex.u(xm)) / (h * h);
    grad_p[c] = (ex.p(xp) - ex.p(xm)) / (2.0 * h);
  }
  return Vec3(-ex.nu * lap + grad_p);
}

double mesh_mean(const SimplicialMesh& mesh, const ScalarField& q) {
  const QuadratureRule& rule = simplex_rule(mesh.dim, 6);
  double acc = 0.0, vol = 0.0;
  for (int t = 0; t < mesh.n_cells(); ++t) {
    acc += integrate_cell(mesh, t, rule, q);
    vol += mesh.cell_measure[t];
  }
  return acc / vol;
}

ExactSolution linear_solution(int dim) {
  // divergence-free affine velocity, zero pressure
  ExactSolution ex;
  ex.name = "linear";
  ex.dim = dim;
  ex.nu = 1.0;
  Mat3 A = Mat3::Zero();
  A(0, 0) = 0.7;
  A(0, 1) = -1.3;
  A(1, 0) = 0.4;
  A(1, 1) = dim == 2 ? -0.7 : 0.1;
  if (dim == 3) {
    A(0, 2) = 0.9;
    A(2, 1) = -0.2;
    A(2, 2) = -0.8;
  }
  const Vec3 b{0.3, -0.1, dim == 3 ? 0.2 : 0.0};
  ex.u = [A, b](const Vec3& x) { return Vec3(A * x + b); };
  ex.grad_u = [A](const Vec3&) { return A; };
  ex.p = [](const Vec3&) { return 0.0; };
  ex.f = [](const Vec3&) { return Vec3::Zero(); };
  ex.g = ex.u;
  ex.make_mesh = dim == 2 ? std::function<SimplicialMesh(int)>(generate_unit_square)
                          : std::function<SimplicialMesh(int)>(generate_unit_cube);
  return ex;
}

}  // namespace

TEST_CASE("manufactured solutions satisfy their own calculus") {
  using Builder = ExactSolution (*)(double);
  const Builder builders[] = {solution_vortex2d, solution_cube3d, solution_lshape};
  std::mt19937 rng(2406u);
  for (Builder make : builders) {
    for (double nu : {1.0, 1e-3}) {
      const ExactSolution ex = make(nu);
      CAPTURE(ex.name);
      CAPTURE(nu);
      for (int trial = 0; trial < 40; ++trial) {
        const Vec3 x = domain_point(ex, rng);
        const Mat3 g = ex.grad_u(x);

        // solenoidal, and the stored Jacobian is the Jacobian of u
        CHECK(std::abs(g.trace()) <= 1e-12);
        const Mat3 gn = num_jacobian(ex.u, ex.dim, x, 1e-5);
        CHECK((g - gn).norm() <= 1e-6 * (1.0 + g.norm()));

        // f really is -nu lap(u) + grad(p)
        const Vec3 fx = ex.f(x);
        const Vec3 fn = num_momentum(ex, x, 1e-5);
        CHECK((fx - fn).norm() <= 1e-5 * (1.0 + fx.norm()));

        // g is the trace of u (same functions by construction, sample anyway)
        CHECK((ex.g(x) - ex.u(x)).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("stated pressure means match quadrature") {
  const ExactSolution vortex = solution_vortex2d(1.0);
  CHECK(std::abs(mesh_mean(generate_unit_square(8), vortex.p) - vortex.p_mean) <= 1e-12);

  const ExactSolution cube = solution_cube3d(1.0);
  CHECK(std::abs(mesh_mean(generate_unit_cube(4), cube.p) - cube.p_mean) <= 1e-4);

  // |y| is linear on every L-shape cell (the mesh resolves y = 0), so the
  // degree-6 rule integrates it exactly.
  const ExactSolution ell = solution_lshape(1.0);
  CHECK(std::abs(mesh_mean(generate_lshape(4), ell.p) - ell.p_mean) <= 1e-13);
}

TEST_CASE("error norms vanish on an exactly representable solution") {
  for (int dim : {2, 3}) {
    const ExactSolution ex = linear_solution(dim);
    SimplicialMesh mesh = ex.make_mesh(3);
    if (dim == 2) perturb(mesh, 0.2, 77);
    EGSpace s(mesh);
    const WeakGradient wg = WeakGradient::build(s);
    const EGField uh = interpolate(s, ex.u, ex.grad_u);
    const PressureField ph(s);

    const ErrorNorms err = error_norms(wg, ex, uh, ph);
    CHECK(err.u_triple <= 1e-11);
    CHECK(err.u_energy <= 1e-11);
    CHECK(err.p_l2 == 0.0);
    CHECK(err.p_proj <= 1e-13);
  }
}

TEST_CASE("affine flows pass through the solve exactly, boundary data included") {
  // Full pipeline regression: an affine divergence-free velocity lies in the
  // discrete space, so assemble + lift + solve must reproduce it to solver
  // precision with every method. The boundary data is nonzero, so this pins
  // the consistency of the Dirichlet lifting against the facet terms: any
  // penalization of the continuous boundary trace shows up here as an O(1)
  // error, not a subtle one.
  auto solve_and_check = [](const ExactSolution& ex, int level) {
    for (const char* method : {"meg", "pr-meg", "eg"}) {
      CAPTURE(ex.name);
      CAPTURE(method);
      if (std::string(method) == "eg") {
        for (double rho : {2.0, 10.0}) {
          RunOptions opts;
          opts.rho = rho;
          const RunRecord r = run_single(ex, method, level, opts);
          CHECK(r.err.u_triple <= 1e-9);
          CHECK(r.err.p_l2 <= 1e-9);
        }
      } else {
        const RunRecord r = run_single(ex, method, level);
        CHECK(r.err.u_triple <= 1e-9);
        CHECK(r.err.p_l2 <= 1e-9);
      }
    }
  };

  solve_and_check(linear_solution(2), 8);
  solve_and_check(linear_solution(3), 4);

  // Same flow on a perturbed grid (nonuniform facet geometry in the lift).
  ExactSolution bent = linear_solution(2);
  bent.make_mesh = [](int n) {
    SimplicialMesh m = generate_unit_square(n);
    perturb(m, 0.25, 4242);
    return m;
  };
  solve_and_check(bent, 8);

  // And on the square-with-hole mesh, where the inner boundary carries
  // nonzero data too and the lift acts on both marker groups at once.
  ExactSolution holed = linear_solution(2);
  holed.make_mesh = [](int) {
    return load_mesh(std::string(STOKESEG_DATA_DIR) + "/square_with_hole.smesh");
  };
  solve_and_check(holed, 1);
}

TEST_CASE("interpolant errors drop at first order") {
  const ExactSolution ex = solution_vortex2d(1.0);
  double prev_u = 0.0, prev_p = 0.0;
  for (int n : {4, 8, 16}) {
    const SimplicialMesh mesh = ex.make_mesh(n);
    EGSpace s(mesh);
    const WeakGradient wg = WeakGradient::build(s);
    const EGField uh = interpolate(s, ex.u, ex.grad_u);
    PressureField ph = project_p0(s, ex.p);
    ph.remove_mean();

    const ErrorNorms err = error_norms(wg, ex, uh, ph);
    CHECK(err.u_triple > 0.0);
    CHECK(err.p_proj <= 1e-12);  // ph is that projection
    if (n > 4) {
      CHECK(prev_u / err.u_triple == doctest::Approx(2.0).epsilon(0.25));
      CHECK(prev_p / err.p_l2 == doctest::Approx(2.0).epsilon(0.25));
    }
    prev_u = err.u_triple;
    prev_p = err.p_l2;
  }
}

TEST_CASE("a single run fills its record") {
  const ExactSolution ex = solution_vortex2d(0.7);

  const RunRecord meg = run_single(ex, "meg", 4);
  CHECK(meg.method == "meg");
  CHECK(meg.h == 0.25);
  CHECK(meg.nu == 0.7);
  CHECK(std::isnan(meg.rho));
  CHECK(std::isnan(meg.rate_u));
  CHECK(std::isnan(meg.rate_p));
  CHECK(std::isnan(meg.cond2));
  CHECK(meg.err.u_triple > 0.0);
  CHECK(meg.err.p_l2 > 0.0);
  CHECK(meg.assemble_s >= 0.0);
  CHECK(meg.solve_s >= 0.0);

  RunOptions opts;
  opts.rho = 3.0;
  opts.with_cond = true;
  const RunRecord eg = run_single(ex, "eg", 4, opts);
  CHECK(eg.rho == 3.0);
  CHECK(eg.cond2 > 1.0);

  CHECK_THROWS_AS(run_single(ex, "p2p1", 4), InvalidParameter);
  CHECK_THROWS_AS(run_single(ex, "meg", 0), InvalidParameter);
}

TEST_CASE("convergence bookkeeping: rates are the log2 error ratios") {
  const ExactSolution ex = solution_vortex2d(1.0);
  const std::vector<RunRecord> recs = convergence_study(ex, "meg", {4, 8});
  REQUIRE(recs.size() == 2);
  CHECK(std::isnan(recs[0].rate_u));
  CHECK(std::isnan(recs[0].rate_p));
  CHECK(recs[1].rate_u == std::log2(recs[0].err.u_triple / recs[1].err.u_triple));
  CHECK(recs[1].rate_p == std::log2(recs[0].err.p_l2 / recs[1].err.p_l2));
  CHECK(recs[1].rate_u > 0.8);

  CHECK_THROWS_AS(convergence_study(ex, "meg", {}), InvalidParameter);
}

TEST_CASE("hypothetical weight one reproduces the parameter-free form") {
  const ExactSolution ex = solution_vortex2d(1.0);
  const RunRecord base = run_single(ex, "meg", 4);
  const std::vector<RunRecord> swept = penalty_sweep(ex, 4, {1.0}, true, false);
  REQUIRE(swept.size() == 1);
  CHECK(swept[0].method == "meg");
  CHECK(swept[0].rho == 1.0);
  // same assembly path, same factorization: identical numbers
  CHECK(swept[0].err.u_triple == base.err.u_triple);
  CHECK(swept[0].err.p_l2 == base.err.p_l2);

  const std::vector<RunRecord> range = penalty_sweep(ex, 4, {0.5, 1.0, 2.0}, true, false);
  double lo = range[0].err.u_triple, hi = lo;
  for (const RunRecord& r : range) {
    lo = std::min(lo, r.err.u_triple);
    hi = std::max(hi, r.err.u_triple);
  }
  CHECK(hi / lo < 5.0);  // the swept weight barely matters

  CHECK_THROWS_AS(penalty_sweep(ex, 4, {}, false), InvalidParameter);
}

TEST_CASE("reconstructed forcing decouples the velocity from the viscosity") {
  const std::vector<RunRecord> pr =
      robustness_sweep("vortex2d", "pr-meg", 8, {1.0, 1e-4});
  REQUIRE(pr.size() == 2);
  CHECK(std::abs(pr[0].err.u_triple - pr[1].err.u_triple) <= 1e-6 * pr[0].err.u_triple);

  const std::vector<RunRecord> meg = robustness_sweep("vortex2d", "meg", 8, {1e-4});
  CHECK(meg[0].err.u_triple >= 10.0 * pr[1].err.u_triple);
}

TEST_CASE("inf-sup probe agrees with a dense SVD and is stable in h") {
  const SimplicialMesh mesh = generate_unit_square(4);
  const double beta = infsup_probe(mesh);
  CHECK(beta > 0.05);

  // independent route: singular values of D^-1/2 B X^-1/2
  EGSpace s(mesh);
  const WeakGradient wg = WeakGradient::build(s);
  const SaddleSystem sys = assemble_meg(s, wg, 1.0);
  const VectorField zero = [](const Vec3&) { return Vec3::Zero(); };
  const ReducedSystem rs = apply_dirichlet(sys, Vector::Zero(s.n_velocity()), zero);
  const Eigen::MatrixXd X = Eigen::MatrixXd(rs.A);
  const Eigen::MatrixXd Bd = Eigen::MatrixXd(rs.B);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esx(X);
  const Eigen::MatrixXd C = Vector(rs.m.array().sqrt().inverse()).asDiagonal() * Bd *
                            esx.operatorInverseSqrt();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const Vector sv = svd.singularValues();  // descending
  const int np = static_cast<int>(rs.m.size());
  CHECK(sv[np - 1] <= 1e-10);  // the constant pressure
  CHECK(beta == doctest::Approx(sv[np - 2]).epsilon(1e-9));

  const double beta8 = infsup_probe(generate_unit_square(8));
  CHECK(std::abs(beta8 - beta) / beta < 0.2);

  CHECK_THROWS_AS(infsup_probe(mesh, 10), BudgetExceeded);
}

TEST_CASE("problem lookup by name and from a mesh file") {
  CHECK_THROWS_AS(make_solution("stokes9000", 1.0), InvalidParameter);
  CHECK_THROWS_AS(make_solution("file:/tmp/definitely_missing.smesh", 1.0), ParseError);

  const std::string path = "/tmp/analysis_two_tri.smesh";
  {
    std::ofstream out(path);
    out << "dim 2\nvertices 4\n0 0\n1 0\n1 1\n0 1\ncells 2\n0 1 2\n0 2 3\n";
  }
  const ExactSolution ex = make_solution("file:" + path, 0.5);
  CHECK(ex.name == "file:" + path);
  CHECK(ex.dim == 2);
  CHECK(ex.nu == 0.5);
  // the level argument is ignored for file meshes
  CHECK(ex.make_mesh(1).n_cells() == 2);
  CHECK(ex.make_mesh(9).n_cells() == 2);
}
