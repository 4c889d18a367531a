// Weak derivatives and facet jumps for the enriched space.
//
// The weak gradient on a cell T is the constant tensor
//   grad_w v |_T = 1/|T| sum_{e in dT} int_e {v} (x) n_{T,e}
// where {v} is the facet value: the one-sided trace on boundary facets and
// the average across interior ones. Facet values of every basis function are
// linear along the facet, so the one-point midpoint rule used below is exact.
//
// Boundary facet values: the continuous trace is always kept; the enrichment
// part is dropped by default (the essential condition constrains only the
// continuous part, the enrichment satisfies its boundary condition weakly).
// FullTrace keeps it instead, which reproduces the textbook one-sided value;
// the two agree on fields whose continuous part vanishes on the boundary.
#pragma once

#include <utility>
#include <vector>

#include "stokeseg/spaces.hpp"

namespace stokeseg {

enum class BoundaryValue { DropEnrichment, FullTrace };

struct WeakGradient {
  const EGSpace* space = nullptr;
  BoundaryValue convention = BoundaryValue::DropEnrichment;
  // Per cell: (velocity dof, constant tensor it contributes), sorted by dof.
  // Touches the cell's own d(d+1)+1 DOFs plus the facet-neighbor enrichments.
  std::vector<std::vector<std::pair<int, Mat3>>> cell_terms;

  static WeakGradient build(const EGSpace& s,
                            BoundaryValue convention = BoundaryValue::DropEnrichment);

  // Apply the stencil to a coefficient field.
  Mat3 of_field(const EGField& f, int cell) const;
  double divergence_of_field(const EGField& f, int cell) const;
};

// Jump [v] across a facet, reported as values at the facet's vertices (the
// jump of any EG field is linear there). Interior: plus-side minus minus-side;
// the continuous part cancels so only enrichments survive. Boundary: the trace
// with the continuous part removed (the part the essential condition pins),
// i.e. the enrichment trace.
std::array<Vec3, 3> jump_on_facet(const EGField& f, int facet);

// Both sides of the strong-weak commutation identity
//   sum_T int_T (grad v - grad_w v) : X  =  sum_e int_e [v] . ({X} n_e)
// for one cell-wise constant tensor field X. Returned as (lhs, rhs); the two
// agree to rounding for every EG field under the conventions above.
std::pair<double, double> strong_weak_residual(const WeakGradient& wg, const EGField& f,
                                               const std::vector<Mat3>& X);

// Divergence flavor of the same identity with cell-wise constants q:
//   sum_T int_T (div v - div_w v) q  =  sum_e int_e ([v].n_e) {q}.
std::pair<double, double> strong_weak_divergence_residual(const WeakGradient& wg,
                                                          const EGField& f,
                                                          const std::vector<double>& q);

}  // namespace stokeseg
