#include "stokeseg/reconstruction.hpp"

#include <cmath>
#include <vector>

#include "stokeseg/quadrature.hpp"

namespace stokeseg {

namespace {

// Local moment matrix of one cell: row (local facet f)*d + m is the moment
// functional of that facet applied to basis column e_c * l_j, c*(d+1)+j.
// Cell hat l_j restricted to a facet is the facet hat of the matching vertex
// (or zero when j sits opposite), so entries reduce to the moment weights.
Eigen::MatrixXd local_moment_matrix(const EGSpace& s, int cell) {
  const SimplicialMesh& m = *s.mesh;
  const int d = s.dim;
  const int n = d * (d + 1);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int f = 0; f <= d; ++f) {
    const int e = m.cell_facets[cell][f];
    const Facet& fa = m.facets[e];
    const auto w = facet_moment_weights(m, e);
    for (int j = 0; j <= d; ++j) {
      int k = -1;  // facet-local index of cell vertex j, if on the facet
      for (int kk = 0; kk < d; ++kk)
        if (fa.v[kk] == m.cells[cell][j]) k = kk;
      if (k < 0) continue;
      for (int c = 0; c < d; ++c)
        for (int mo = 0; mo < d; ++mo) L(f * d + mo, c * (d + 1) + j) = fa.normal[c] * w[k][mo];
    }
  }
  return L;
}

Eigen::PartialPivLU<Eigen::MatrixXd> factor_local(const EGSpace& s, int cell) {
  Eigen::MatrixXd L = local_moment_matrix(s, cell);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(L);
  // PartialPivLU has no rank query; a degenerate cell shows up as a tiny
  // pivot product relative to the matrix scale.
  const double scale = L.cwiseAbs().maxCoeff();
  if (!(std::abs(lu.determinant()) > 1e-14 * std::pow(scale, L.rows())))
    throw SingularLocalBDM("cell " + std::to_string(cell) + ": facet moments degenerate");
  return lu;
}

// Local restriction of the global moment vector: entry f*d+m for facet f.
Vector gather_moments(const Reconstruction& rec, const Vector& moments, int cell) {
  const SimplicialMesh& m = *rec.space->mesh;
  const int d = rec.space->dim;
  Vector loc(d * (d + 1));
  for (int f = 0; f <= d; ++f)
    for (int mo = 0; mo < d; ++mo) loc[f * d + mo] = moments[m.cell_facets[cell][f] * d + mo];
  return loc;
}

}  // namespace

std::array<std::array<double, 3>, 3> facet_moment_weights(const SimplicialMesh& m, int f) {
  std::array<std::array<double, 3>, 3> w{};
  const double len = m.facets[f].measure;
  if (m.dim == 2) {
    // q_1 = l1 - l0: odd around the midpoint, sign follows the vertex order.
    w[0] = {len / 2.0, -len / 6.0, 0.0};
    w[1] = {len / 2.0, len / 6.0, 0.0};
  } else {
    // q_m = l_{m-1} - 1/3 for m = 1, 2.
    for (int k = 0; k < 3; ++k)
      w[k] = {len / 3.0, (k == 0 ? 2.0 : -1.0) * len / 36.0, (k == 1 ? 2.0 : -1.0) * len / 36.0};
  }
  return w;
}

Reconstruction build_reconstruction(const EGSpace& s) {
  const SimplicialMesh& m = *s.mesh;
  const int d = s.dim;
  Reconstruction rec{&s, d, SpMat(d * m.n_facets(), s.n_velocity())};

  std::vector<Eigen::Triplet<double>> trips;
  for (int e = 0; e < m.n_facets(); ++e) {
    const Facet& fa = m.facets[e];
    if (fa.on_boundary()) continue;  // boundary rows stay identically zero
    const auto w = facet_moment_weights(m, e);

    // Averaged trace at the facet vertices: the continuous part is single
    // valued, each enrichment enters with weight 1/2.
    for (int mo = 0; mo < d; ++mo) {
      const int row = e * d + mo;
      for (int k = 0; k < d; ++k) {
        for (int c = 0; c < d; ++c)
          trips.emplace_back(row, s.cont_dof(c, fa.v[k]), fa.normal[c] * w[k][mo]);
        const Vec3 x = m.vertices[fa.v[k]];
        const double psi_p = 0.5 * (x - m.cell_centroid[fa.cell_plus]).dot(fa.normal);
        const double psi_m = 0.5 * (x - m.cell_centroid[fa.cell_minus]).dot(fa.normal);
        trips.emplace_back(row, s.enr_dof(fa.cell_plus), psi_p * w[k][mo]);
        trips.emplace_back(row, s.enr_dof(fa.cell_minus), psi_m * w[k][mo]);
      }
    }
  }
  rec.R.setFromTriplets(trips.begin(), trips.end());
  return rec;
}

Vector local_coefficients(const Reconstruction& rec, const Vector& moments, int cell) {
  return factor_local(*rec.space, cell).solve(gather_moments(rec, moments, cell));
}

Vec3 eval_local(const EGSpace& s, int cell, const Vector& coef, const Vec3& x) {
  const auto lam = s.mesh->barycentric(cell, x);
  Vec3 v = Vec3::Zero();
  for (int c = 0; c < s.dim; ++c)
    for (int j = 0; j <= s.dim; ++j) v[c] += coef[c * (s.dim + 1) + j] * lam[j];
  return v;
}

double divergence_local(const EGSpace& s, int cell, const Vector& coef) {
  const auto grads = barycentric_gradients(*s.mesh, cell);
  double div = 0.0;
  for (int c = 0; c < s.dim; ++c)
    for (int j = 0; j <= s.dim; ++j) div += coef[c * (s.dim + 1) + j] * grads[j][c];
  return div;
}

Vector assemble_load_pr(const Reconstruction& rec, const VectorField& f) {
  const EGSpace& s = *rec.space;
  const SimplicialMesh& m = *s.mesh;
  const int d = s.dim;
  const QuadratureRule& rule = simplex_rule(d, 5);

  // (f, Rv)_T = g_T . coef_T = (L_T^-T g_T) . moments_T with
  // g_T[(c,j)] = int_T f_c l_j, so scatter the adjoint solves into moment
  // space and pull back through R once.
  Vector G = Vector::Zero(d * m.n_facets());
  for (int t = 0; t < m.n_cells(); ++t) {
    Vector g = Vector::Zero(d * (d + 1));
    const double scale = m.cell_measure[t] / reference_measure(d);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& lam = rule.points[q];
      const Vec3 fx = rule.weights[q] * scale * f(cell_point(m, t, lam));
      for (int c = 0; c < d; ++c)
        for (int j = 0; j <= d; ++j) g[c * (d + 1) + j] += fx[c] * lam[j];
    }
    const Vector z = factor_local(s, t).transpose().solve(g);
    for (int f_loc = 0; f_loc <= d; ++f_loc)
      for (int mo = 0; mo < d; ++mo) G[m.cell_facets[t][f_loc] * d + mo] += z[f_loc * d + mo];
  }
  return rec.R.transpose() * G;
}

Vector assemble_gradient_load_pr(const Reconstruction& rec, const ScalarField& phi) {
  const EGSpace& s = *rec.space;
  const SimplicialMesh& m = *s.mesh;
  const int d = s.dim;
  const QuadratureRule& rule = simplex_rule(d, 5);

  // (grad phi, Rv) = -sum_T (int_T phi) div(Rv)|_T and the constant
  // divergence is |T|^-1 sum_f sign * (zeroth moment of facet f), so the
  // whole load lives on the zeroth-moment rows of R.
  Vector G = Vector::Zero(d * m.n_facets());
  for (int t = 0; t < m.n_cells(); ++t) {
    const double phi_int = integrate_cell(m, t, rule, phi);
    for (int f_loc = 0; f_loc <= d; ++f_loc) {
      const int e = m.cell_facets[t][f_loc];
      const double sign = (m.facets[e].cell_plus == t) ? 1.0 : -1.0;
      G[e * d] -= sign * phi_int / m.cell_measure[t];
    }
  }
  return rec.R.transpose() * G;
}

}  // namespace stokeseg
