// Fixed quadrature tables on reference simplices, in barycentric form.
//
// Points are barycentric so mapping to a physical cell or facet is just a
// convex combination of its vertices; the affine Jacobian enters only through
// the measure ratio. Weights sum to the reference measure (interval 1,
// triangle 1/2, tet 1/6). Requests are served by the smallest stored table
// of at least the requested degree; `degree` reports the table's own degree.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "stokeseg/mesh.hpp"
#include "stokeseg/types.hpp"

namespace stokeseg {

struct QuadratureRule {
  int simplex_dim = 0;  // 1 interval, 2 triangle, 3 tetrahedron
  int degree = 0;       // exact through this total polynomial degree
  std::vector<std::array<double, 4>> points;  // barycentric, trailing zeros
  std::vector<double> weights;                // sum to reference measure

  std::size_t size() const { return points.size(); }
};

// Measure of the reference simplex of the given dimension.
double reference_measure(int simplex_dim);

// Volume rule for cells of a dim-dimensional mesh (dim in {2,3}).
// Throws UnsupportedDegree outside 1..6.
const QuadratureRule& simplex_rule(int dim, int degree);

// Rule for facets of a dim-dimensional mesh (interval / triangle).
const QuadratureRule& facet_rule(int dim, int degree);

// Integral of f over a physical cell; f receives the physical point.
double integrate_cell(const SimplicialMesh& mesh, int cell, const QuadratureRule& rule,
                      const std::function<double(const Vec3&)>& f);

// Integral of f over a physical facet.
double integrate_facet(const SimplicialMesh& mesh, int facet, const QuadratureRule& rule,
                       const std::function<double(const Vec3&)>& f);

// Physical quadrature point for barycentric weights on a cell / facet.
Vec3 cell_point(const SimplicialMesh& mesh, int cell, const std::array<double, 4>& lambda);
Vec3 facet_point(const SimplicialMesh& mesh, int facet, const std::array<double, 4>& lambda);

}  // namespace stokeseg
