// Velocity and pressure spaces of the enriched scheme.
//
// Velocity = continuous vector P1 plus one radial enrichment psi_T(x) = x - x_T
// per cell, scaled by a single coefficient c_T. Pressure = piecewise constants.
// DOF layout: all continuous x-components by vertex, then y (then z), then the
// enrichment coefficients by cell. Pressure unknowns are numbered by cell.
#pragma once

#include <functional>

#include "stokeseg/mesh.hpp"
#include "stokeseg/types.hpp"

namespace stokeseg {

using VectorField = std::function<Vec3(const Vec3&)>;
using TensorField = std::function<Mat3(const Vec3&)>;  // Jacobian, (i,j) = d u_i / d x_j
using ScalarField = std::function<double(const Vec3&)>;

struct EGSpace {
  const SimplicialMesh* mesh = nullptr;
  int dim = 0;

  explicit EGSpace(const SimplicialMesh& m) : mesh(&m), dim(m.dim) {}

  int n_cont() const { return dim * mesh->n_vertices(); }
  int n_enr() const { return mesh->n_cells(); }
  int n_velocity() const { return n_cont() + n_enr(); }
  int n_pressure() const { return mesh->n_cells(); }

  int cont_dof(int comp, int vertex) const { return comp * mesh->n_vertices() + vertex; }
  int enr_dof(int cell) const { return n_cont() + cell; }

  bool dof_is_enrichment(int dof) const { return dof >= n_cont(); }
  int dof_component(int dof) const { return dof / mesh->n_vertices(); }  // continuous only
  int dof_vertex(int dof) const { return dof % mesh->n_vertices(); }     // continuous only

  // Continuous DOFs sitting on boundary vertices; these carry the essential
  // boundary condition. Enrichment DOFs are never constrained.
  bool dof_on_boundary(int dof) const {
    return !dof_is_enrichment(dof) && mesh->vertex_on_boundary[dof_vertex(dof)];
  }
};

struct EGField {
  const EGSpace* space = nullptr;
  Vector coeffs;  // length n_velocity()

  explicit EGField(const EGSpace& s) : space(&s), coeffs(Vector::Zero(s.n_velocity())) {}

  double enrichment(int cell) const { return coeffs[space->enr_dof(cell)]; }
  Vec3 continuous_at_vertex(int v) const {
    Vec3 u = Vec3::Zero();
    for (int c = 0; c < space->dim; ++c) u[c] = coeffs[space->cont_dof(c, v)];
    return u;
  }

  // Continuous part at a barycentric point of a cell.
  Vec3 continuous_at(int cell, const std::array<double, 4>& lambda) const;
  // Full value v^C(x) + c_T (x - x_T) at a physical point inside `cell`.
  Vec3 eval(int cell, const Vec3& x) const;
  // Broken (strong) gradient, constant per cell: grad v^C + c_T I.
  Mat3 broken_gradient(int cell) const;
};

struct PressureField {
  const EGSpace* space = nullptr;
  Vector values;  // one per cell

  explicit PressureField(const EGSpace& s) : space(&s), values(Vector::Zero(s.n_pressure())) {}

  // Weighted mean sum |T| p_T / |Omega|.
  double mean() const;
  void remove_mean();
};

// Canonical interpolant: nodal values for the continuous part, then the
// enrichment coefficient matches the cell-average divergence of the remainder,
//   c_T = 1/(d |T|) int_T div(u - Pi_C u).
EGField interpolate(const EGSpace& s, const VectorField& u, const TensorField& grad_u);

// Cell-average (L2 projection onto piecewise constants).
PressureField project_p0(const EGSpace& s, const ScalarField& q);

// Local L2 projections onto [P1]^d per cell and per facet (no continuity
// across cells). Values are stored nodally: entry k of a cell (facet) array
// belongs to its k-th vertex.
struct ThetaProjection {
  std::vector<std::array<Vec3, 4>> cell_values;
  std::vector<std::array<Vec3, 3>> facet_values;
};
ThetaProjection project_theta(const EGSpace& s, const VectorField& u);

}  // namespace stokeseg
