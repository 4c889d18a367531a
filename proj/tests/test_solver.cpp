#include <doctest.h>

#include <Eigen/Dense>

#include "stokeseg/solver.hpp"
#include "support.hpp"

using namespace stokeseg;

namespace {

ReducedSystem meg_reduced(const EGSpace& s, const WeakGradient& wg, double nu,
                          const VectorField& f) {
  const SaddleSystem sys = assemble_meg(s, wg, nu);
  return apply_dirichlet(sys, assemble_load(s, f),
                         [](const Vec3&) { return Vec3::Zero().eval(); });
}

SpMat sparse_diag(const Vector& d) {
  SpMat M(d.size(), d.size());
  for (int i = 0; i < d.size(); ++i) M.insert(i, i) = d[i];
  M.makeCompressed();
  return M;
}

}  // namespace

TEST_CASE("zero data produces the zero solution") {
  const SimplicialMesh m = generate_unit_square(4);
  const EGSpace s(m);
  const WeakGradient wg = WeakGradient::build(s);
  const auto rs = meg_reduced(s, wg, 1.0, [](const Vec3&) { return Vec3::Zero().eval(); });
  const StokesSolution sol = solve_stokes(rs);
  CHECK(sol.u.coeffs.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sol.p.values.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sol.residual == 0.0);
}

TEST_CASE("solutions satisfy both discrete equations") {
  const VectorField f = [](const Vec3& x) {
    return Vec3(std::sin(3.0 * x[0]) + x[1], std::cos(2.0 * x[1]) - x[0] * x[0], 0.0);
  };
  for (int variant = 0; variant < 2; ++variant) {
    SimplicialMesh m = generate_unit_square(8);
    if (variant) perturb(m, 0.2, 77);
    const EGSpace s(m);
    const WeakGradient wg = WeakGradient::build(s);
    const SaddleSystem sys =
        variant ? assemble_eg(s, 0.01, 4.0) : assemble_meg(s, wg, 0.01);
    const VectorField zero = [](const Vec3&) { return Vec3::Zero().eval(); };
    const ReducedSystem rs = apply_dirichlet(sys, assemble_load(s, f), zero);
    const StokesSolution sol = solve_stokes(rs);

    CHECK(sol.residual <= 1e-10);
    CHECK(std::abs(sol.p.mean()) <= 1e-10 * (1.0 + sol.p.values.norm()));

    Vector x(rs.kept.size());
    for (std::size_t i = 0; i < rs.kept.size(); ++i) x[i] = sol.u.coeffs[rs.kept[i]];
    const Vector res_u = rs.A * x - rs.B.transpose() * sol.p.values - rs.F;
    const Vector res_p = rs.B * x - rs.Gp;
    const double scale_u = rs.F.norm();
    const double scale_p = (rs.B * x).norm() + 1.0;

    std::mt19937 rng(9 + variant);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int probe = 0; probe < 20; ++probe) {
      Vector v(res_u.size()), q(res_p.size());
      for (int i = 0; i < v.size(); ++i) v[i] = gauss(rng);
      for (int i = 0; i < q.size(); ++i) q[i] = gauss(rng);
      CHECK(std::abs(v.normalized().dot(res_u)) <= 1e-9 * scale_u);
      CHECK(std::abs(q.normalized().dot(res_p)) <= 1e-9 * scale_p);
    }
  }
}

TEST_CASE("solutions scale linearly with the data") {
  const SimplicialMesh m = generate_unit_square(6);
  const EGSpace s(m);
  const WeakGradient wg = WeakGradient::build(s);
  const VectorField f = [](const Vec3& x) { return Vec3(x[1] * x[1], -x[0], 0.0); };
  const VectorField f_scaled = [&](const Vec3& x) { return Vec3(3.5 * f(x)); };
  const StokesSolution a = solve_stokes(meg_reduced(s, wg, 1.0, f));
  const StokesSolution b = solve_stokes(meg_reduced(s, wg, 1.0, f_scaled));
  const double scale = b.u.coeffs.cwiseAbs().maxCoeff();
  CHECK((3.5 * a.u.coeffs - b.u.coeffs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  CHECK((3.5 * a.p.values - b.p.values).cwiseAbs().maxCoeff() <=
        1e-12 * b.p.values.cwiseAbs().maxCoeff());
}

TEST_CASE("condition number estimation on known spectra") {
  const SpMat I = sparse_diag(Vector::Ones(40));
  CHECK(condition_number(I) == doctest::Approx(1.0).epsilon(1e-10));

  Vector d = Vector::Ones(30);
  d[17] = 1e-6;
  CHECK(condition_number(sparse_diag(d)) == doctest::Approx(1e6).epsilon(0.05));

  Vector spread(25);
  for (int i = 0; i < 25; ++i) spread[i] = 1.0 + i;
  CHECK(condition_number(sparse_diag(spread)) == doctest::Approx(25.0).epsilon(0.05));

  CHECK_THROWS_AS(condition_number(I, 10), BudgetExceeded);
}

TEST_CASE("penalty growth inflates the condition number") {
  const SimplicialMesh m = generate_unit_square(8);
  const EGSpace s(m);
  const VectorField zero = [](const Vec3&) { return Vec3::Zero().eval(); };
  double prev = 0.0;
  for (double rho : {2.0, 5.0, 10.0}) {
    const SaddleSystem sys = assemble_eg(s, 1.0, rho);
    const ReducedSystem rs = apply_dirichlet(sys, Vector::Zero(s.n_velocity()), zero);
    const double kappa = condition_number(build_augmented(rs));
    CHECK(kappa > 0.0);
    CHECK(kappa >= prev);
    prev = kappa;
  }
}
