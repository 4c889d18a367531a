#include "stokeseg/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace stokeseg {

SpMat build_augmented(const ReducedSystem& rs) {
  const int nu = static_cast<int>(rs.kept.size());
  const int np = rs.space->n_pressure();
  const int n = nu + np + 1;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(rs.A.nonZeros() + 2 * rs.B.nonZeros() + 2 * np);
  for (int col = 0; col < rs.A.outerSize(); ++col)
    for (SpMat::InnerIterator it(rs.A, col); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), col, it.value());
  for (int col = 0; col < rs.B.outerSize(); ++col)
    for (SpMat::InnerIterator it(rs.B, col); it; ++it) {
      const int r = nu + static_cast<int>(it.row());
      trips.emplace_back(r, col, it.value());
      trips.emplace_back(col, r, it.value());
    }
  for (int t = 0; t < np; ++t) {
    trips.emplace_back(nu + t, nu + np, rs.m[t]);
    trips.emplace_back(nu + np, nu + t, rs.m[t]);
  }
  SpMat M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

StokesSolution solve_stokes(const ReducedSystem& rs) {
  const int nu = static_cast<int>(rs.kept.size());
  const int np = rs.space->n_pressure();
  const double vol = rs.m.sum();
  const int pin = nu + np - 1;

  // The multiplier row/column of the augmented matrix is dense, and a direct
  // factorization of it fills in catastrophically. What gets factorized is a
  // sparse equivalent instead: column sums of the reduced B vanish, so
  // summing the divergence rows yields the multiplier in closed form; the
  // last divergence row is then implied by the others and is replaced by
  // pinning that cell's pressure; the constant-pressure shift (invisible to
  // the momentum rows, B^T 1 = 0) restores the mean constraint afterwards.
  // The momentum rows are divided by nu before factorizing (with s/nu as the
  // matching unknown), which keeps the factorized matrix equally conditioned
  // for every viscosity; small nu would otherwise cost six digits of velocity
  // accuracy. Residuals are still measured against the full augmented system,
  // and iterative refinement against it cleans up the rounding the scaling
  // and elimination leave behind.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(rs.A.nonZeros() + 2 * rs.B.nonZeros() + 1);
  for (int col = 0; col < rs.A.outerSize(); ++col)
    for (SpMat::InnerIterator it(rs.A, col); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), col, it.value() / rs.nu);
  for (int col = 0; col < rs.B.outerSize(); ++col)
    for (SpMat::InnerIterator it(rs.B, col); it; ++it) {
      const int r = nu + static_cast<int>(it.row());
      trips.emplace_back(col, r, it.value());
      if (r != pin) trips.emplace_back(r, col, it.value());
    }
  trips.emplace_back(pin, pin, 1.0);
  SpMat K(nu + np, nu + np);
  K.setFromTriplets(trips.begin(), trips.end());

  Eigen::SparseLU<SpMat> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("saddle-point factorization failed: " + lu.lastErrorMessage());

  // One application of the inverse of the augmented matrix, for the solve
  // itself and for refinement corrections.
  const auto apply_inverse = [&](const Vector& r_u, const Vector& r_p, double r_lam,
                                 Vector& y_u, Vector& y_p, double& lam) {
    lam = r_p.sum() / vol;
    Vector rhs(nu + np);
    rhs.head(nu) = r_u / rs.nu;
    rhs.segment(nu, np) = r_p - lam * rs.m;
    rhs[pin] = 0.0;
    const Vector y = lu.solve(rhs);
    y_u = y.head(nu);
    y_p = rs.nu * y.segment(nu, np);
    y_p.array() += (r_lam - rs.m.dot(y_p)) / vol;
  };

  const double rhs_norm = std::sqrt(rs.F.squaredNorm() + rs.Gp.squaredNorm());
  Vector u = Vector::Zero(nu), s = Vector::Zero(np);
  double lam = 0.0, residual = 0.0;
  if (rhs_norm > 0.0) {
    Vector ru(nu), rp(np);
    double rl = 0.0;
    const auto update_residual = [&]() {
      ru = rs.F - (rs.A * u + rs.B.transpose() * s);
      rp = rs.Gp - (rs.B * u + lam * rs.m);
      rl = -rs.m.dot(s);
      return std::sqrt(ru.squaredNorm() + rp.squaredNorm() + rl * rl) / rhs_norm;
    };

    apply_inverse(rs.F, rs.Gp, 0.0, u, s, lam);
    residual = update_residual();
    // Refinement passes reuse the factorization and cost a fraction of it,
    // so run them down to the rounding floor instead of stopping at the
    // contract tolerance; the extra digits matter when nu is small.
    for (int pass = 0; pass < 5 && residual > 1e-15; ++pass) {
      Vector du(nu), ds(np);
      double dl = 0.0;
      apply_inverse(ru, rp, rl, du, ds, dl);
      u += du;
      s += ds;
      lam += dl;
      const double next = update_residual();
      if (next >= residual) {
        u -= du;
        s -= ds;
        lam -= dl;
        residual = update_residual();
        break;
      }
      residual = next;
    }
    if (residual > 1e-10)
      throw NonConvergence("augmented solve stalled at relative residual " +
                           std::to_string(residual));
  }

  StokesSolution sol{rs.expand(u), PressureField(*rs.space), residual};
  sol.p.values = -s;
  sol.p.remove_mean();
  return sol;
}

double condition_number(const SpMat& M, int budget) {
  const int n = static_cast<int>(M.rows());
  if (n > budget)
    throw BudgetExceeded("matrix of size " + std::to_string(n) +
                         " exceeds the condition-number budget " + std::to_string(budget));

  // fixed seed: estimates are part of reported tables and must reproduce
  std::mt19937 rng(20240613u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = gauss(rng);
  x.normalize();

  // sigma_max: the norm growth ||Mx||/||x|| converges for symmetric M even
  // when the extreme eigenvalues pair up with opposite signs.
  double sigma_max = 0.0;
  int settled = 0;
  for (int it = 0; it < 50000 && settled < 3; ++it) {
    const Vector y = M * x;
    const double est = y.norm();
    if (est == 0.0) return 0.0;  // zero matrix: degenerate, reported as 0
    settled = (std::abs(est - sigma_max) <= 1e-6 * est) ? settled + 1 : 0;
    sigma_max = est;
    x = y / est;
  }

  Eigen::SparseLU<SpMat> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success)
    return std::numeric_limits<double>::infinity();  // singular: kappa is infinite

  for (int i = 0; i < n; ++i) x[i] = gauss(rng);
  x.normalize();
  double inv_norm = 0.0;
  settled = 0;
  for (int it = 0; it < 50000 && settled < 3; ++it) {
    const Vector y = lu.solve(x);
    const double est = y.norm();
    settled = (std::abs(est - inv_norm) <= 1e-6 * est) ? settled + 1 : 0;
    inv_norm = est;
    x = y / est;
  }
  return sigma_max * inv_norm;
}

}  // namespace stokeseg
