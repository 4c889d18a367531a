// Discrete Stokes systems.
//
// Two velocity bilinear forms share one divergence coupling:
//   penalty scheme:   a(w,v) = nu [ (grad w, grad v)_T
//                                 - <{grad w} n, [v]> - <{grad v} n, [w]>
//                                 + rho <h^-1 [w],[v]> ]
//   modified scheme:  a_w(w,v) = nu [ (grad_w w, grad_w v)_T + <h^-1 [w],[v]> ]
//   divergence:       b(w,q) = (div w, q)_T - <[w].n, {q}>  ==  (div_w w, q)_T
// The modified scheme has no penalty parameter; that absence is structural
// (assemble_meg takes none). assemble_meg_swept exists solely for the
// hypothetical-parameter study and scales the stabilization term by rho_m.
//
// Boundary facets: every facet term of a and b sees the enrichment trace
// only. The continuous part is an essential condition, imposed by nodal
// interpolation of g and lifted in apply_dirichlet, so the forms never
// penalize it; the enrichment is driven to zero weakly. This matches the
// weak-derivative boundary value (continuous trace), keeps both routes to B
// identical, and makes plain elimination of the boundary values consistent:
// for a smooth exact solution the momentum residual against any retained
// test function reduces to boundary integrals of that function's continuous
// trace, which vanishes for interior hats and enrichments alike.
#pragma once

#include "stokeseg/spaces.hpp"
#include "stokeseg/weakcalc.hpp"

namespace stokeseg {

struct SaddleSystem {
  const EGSpace* space = nullptr;
  double nu = 1.0;
  SpMat A;   // velocity form, symmetric, n_velocity x n_velocity
  SpMat B;   // divergence coupling, n_pressure x n_velocity
  Vector m;  // cell measures: the pressure mean-constraint vector
};

// Modified scheme (weak derivatives, parameter free).
SaddleSystem assemble_meg(const EGSpace& s, const WeakGradient& wg, double nu);

// Parameter-study variant: stabilization scaled by rho_m > 0.
SaddleSystem assemble_meg_swept(const EGSpace& s, const WeakGradient& wg, double nu,
                                double rho_m);

// Penalty scheme (interior penalty on full gradients), rho > 0.
SaddleSystem assemble_eg(const EGSpace& s, double nu, double rho);

// Body-force functional (f, v) with degree-5 cell quadrature.
Vector assemble_load(const EGSpace& s, const VectorField& f);

// Load of a conservative forcing grad(phi) against plain EG test functions,
// integrated by parts cell by cell: <phi, [v].n>_E - (phi, div v)_T.
Vector assemble_gradient_load(const EGSpace& s, const ScalarField& phi);

// Essential boundary data folded in by lifting: boundary continuous DOFs are
// pinned to nodal values of g and eliminated; enrichment DOFs always stay.
struct ReducedSystem {
  const EGSpace* space = nullptr;
  double nu = 1.0;
  std::vector<int> kept;           // reduced index -> velocity dof
  std::vector<int> reduced_index;  // velocity dof -> reduced index or -1
  SpMat A;                         // kept x kept
  SpMat B;                         // n_pressure x kept
  Vector F;                        // reduced velocity rhs (lifting applied)
  Vector Gp;                       // pressure rhs: B_kept u = Gp
  Vector m;                        // cell measures
  EGField lift;                    // g at boundary vertices, zero elsewhere

  // Scatter a reduced velocity vector back to a full field (adds the lift).
  EGField expand(const Vector& u_reduced) const;
};

ReducedSystem apply_dirichlet(const SaddleSystem& sys, const Vector& F, const VectorField& g);

}  // namespace stokeseg
