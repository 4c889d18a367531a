#include "stokeseg/spaces.hpp"

#include "stokeseg/quadrature.hpp"

namespace stokeseg {

Vec3 EGField::continuous_at(int cell, const std::array<double, 4>& lambda) const {
  const auto& c = space->mesh->cells[cell];
  Vec3 u = Vec3::Zero();
  for (int k = 0; k <= space->dim; ++k) u += lambda[k] * continuous_at_vertex(c[k]);
  return u;
}

Vec3 EGField::eval(int cell, const Vec3& x) const {
  const auto lam = space->mesh->barycentric(cell, x);
  return continuous_at(cell, lam) + enrichment(cell) * (x - space->mesh->cell_centroid[cell]);
}

Mat3 EGField::broken_gradient(int cell) const {
  const SimplicialMesh& m = *space->mesh;
  const auto grads = barycentric_gradients(m, cell);
  Mat3 g = Mat3::Zero();
  for (int k = 0; k <= space->dim; ++k)
    g += continuous_at_vertex(m.cells[cell][k]) * grads[k].transpose();
  for (int c = 0; c < space->dim; ++c) g(c, c) += enrichment(cell);
  return g;
}

double PressureField::mean() const {
  const SimplicialMesh& m = *space->mesh;
  double num = 0.0, den = 0.0;
  for (int t = 0; t < m.n_cells(); ++t) {
    num += m.cell_measure[t] * values[t];
    den += m.cell_measure[t];
  }
  return num / den;
}

void PressureField::remove_mean() { values.array() -= mean(); }

EGField interpolate(const EGSpace& s, const VectorField& u, const TensorField& grad_u) {
  const SimplicialMesh& m = *s.mesh;
  EGField f(s);
  for (int v = 0; v < m.n_vertices(); ++v) {
    const Vec3 val = u(m.vertices[v]);
    for (int c = 0; c < s.dim; ++c) f.coeffs[s.cont_dof(c, v)] = val[c];
  }
  // div(psi_T) = d, so matching the cell-average divergence of u - Pi_C u
  // fixes the enrichment coefficient.
  const QuadratureRule& rule = simplex_rule(s.dim, 5);
  for (int t = 0; t < m.n_cells(); ++t) {
    const double div_u_int =
        integrate_cell(m, t, rule, [&](const Vec3& x) { return grad_u(x).trace(); });
    const Mat3 gc = f.broken_gradient(t);  // enrichment still zero here
    const double div_pc = gc.trace();
    f.coeffs[s.enr_dof(t)] =
        (div_u_int - div_pc * m.cell_measure[t]) / (s.dim * m.cell_measure[t]);
  }
  return f;
}

PressureField project_p0(const EGSpace& s, const ScalarField& q) {
  const SimplicialMesh& m = *s.mesh;
  PressureField p(s);
  const QuadratureRule& rule = simplex_rule(s.dim, 6);
  for (int t = 0; t < m.n_cells(); ++t)
    p.values[t] = integrate_cell(m, t, rule, q) / m.cell_measure[t];
  return p;
}

ThetaProjection project_theta(const EGSpace& s, const VectorField& u) {
  const SimplicialMesh& m = *s.mesh;
  ThetaProjection out;
  out.cell_values.resize(m.n_cells());
  out.facet_values.resize(m.n_facets());

  // P1 mass matrices in the barycentric basis: M_ij = |K| (1 + delta_ij) / c
  // with c = 6 on intervals, 12 on triangles, 20 on tets. Right-hand sides
  // use degree-6 quadrature.
  const QuadratureRule& cell_rule = simplex_rule(s.dim, 6);
  const int nv = s.dim + 1;
  Eigen::MatrixXd M(nv, nv);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) M(i, j) = (i == j ? 2.0 : 1.0);
  M /= (s.dim == 2 ? 12.0 : 20.0);
  const Eigen::MatrixXd Minv = M.inverse();

  for (int t = 0; t < m.n_cells(); ++t) {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nv, 3);
    const double scale = m.cell_measure[t] / reference_measure(s.dim);
    for (std::size_t q = 0; q < cell_rule.size(); ++q) {
      const Vec3 x = cell_point(m, t, cell_rule.points[q]);
      const Vec3 val = u(x);
      for (int i = 0; i < nv; ++i)
        rhs.row(i) += cell_rule.weights[q] * scale * cell_rule.points[q][i] * val.transpose();
    }
    const Eigen::MatrixXd sol = Minv * rhs / m.cell_measure[t];
    for (int i = 0; i < nv; ++i) out.cell_values[t][i] = sol.row(i).transpose();
    if (nv < 4) out.cell_values[t][3] = Vec3::Zero();
  }

  const QuadratureRule& f_rule = facet_rule(s.dim, 6);
  const int nfv = s.dim;
  Eigen::MatrixXd Mf(nfv, nfv);
  for (int i = 0; i < nfv; ++i)
    for (int j = 0; j < nfv; ++j) Mf(i, j) = (i == j ? 2.0 : 1.0);
  Mf /= (s.dim == 2 ? 6.0 : 12.0);
  const Eigen::MatrixXd Mfinv = Mf.inverse();

  for (int e = 0; e < m.n_facets(); ++e) {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nfv, 3);
    const double scale = m.facets[e].measure / reference_measure(f_rule.simplex_dim);
    for (std::size_t q = 0; q < f_rule.size(); ++q) {
      const Vec3 x = facet_point(m, e, f_rule.points[q]);
      const Vec3 val = u(x);
      for (int i = 0; i < nfv; ++i)
        rhs.row(i) += f_rule.weights[q] * scale * f_rule.points[q][i] * val.transpose();
    }
    const Eigen::MatrixXd sol = Mfinv * rhs / m.facets[e].measure;
    out.facet_values[e] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (int i = 0; i < nfv; ++i) out.facet_values[e][i] = sol.row(i).transpose();
  }
  return out;
}

}  // namespace stokeseg
