// H(div) velocity reconstruction into first-order BDM.
//
// Every facet carries d normal moments against the facet-local linear basis
//   2D: {1, 2s/|e| - 1}        (s = arc length from the lower-indexed vertex)
//   3D: {1, l0 - 1/3, l1 - 1/3} (facet barycentrics, vertices ascending)
// R maps a velocity coefficient vector to those moments of its facet average
// on interior facets; boundary moments are forced to zero. On a cell the
// reconstructed field is the unique vector P1 function with the cell's d(d+1)
// facet moments, recovered by a local solve. Normal traces are then single
// valued across interior facets and vanish on the boundary, so loads built
// through R see a divergence-conforming velocity.
#pragma once

#include "stokeseg/spaces.hpp"

namespace stokeseg {

struct Reconstruction {
  const EGSpace* space = nullptr;
  int moments_per_facet = 0;  // = dim
  SpMat R;                    // (moments_per_facet * n_facets) x n_velocity
};

Reconstruction build_reconstruction(const EGSpace& s);

// Integral over facet `f` of (facet hat k) * q_m; w[k][m]. The workhorse for
// both the moment rows of R and the local recovery below.
std::array<std::array<double, 3>, 3> facet_moment_weights(const SimplicialMesh& m, int f);

// Coefficients of the reconstructed field on `cell` in the basis e_c * l_j,
// flattened as c*(dim+1)+j, recovered from the global moment vector R*v.
Vector local_coefficients(const Reconstruction& rec, const Vector& moments, int cell);

Vec3 eval_local(const EGSpace& s, int cell, const Vector& coef, const Vec3& x);
double divergence_local(const EGSpace& s, int cell, const Vector& coef);  // constant per cell

// Body-force functional (f, R v) with degree-5 cell quadrature, via the
// transposed local solves (no global BDM matrix is ever formed).
Vector assemble_load_pr(const Reconstruction& rec, const VectorField& f);

// Forcing grad(phi) against reconstructed test functions. Cell-by-cell parts
// integration leaves only -(phi, div(R v))_T: the normal-trace surface terms
// cancel exactly on interior facets and vanish on the boundary.
Vector assemble_gradient_load_pr(const Reconstruction& rec, const ScalarField& phi);

}  // namespace stokeseg
