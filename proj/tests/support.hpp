// Helpers shared by the unit tests and the acceptance runner: tiny meshes,
// seeded random fields, and independent quadrature-based oracles that the
// production stencils are checked against.
#pragma once

#include <random>
#include <vector>

#include "stokeseg/quadrature.hpp"
#include "stokeseg/spaces.hpp"
#include "stokeseg/weakcalc.hpp"

namespace testsupport {

using namespace stokeseg;

inline SimplicialMesh single_triangle() {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  std::vector<std::array<int, 4>> c = {{{0, 1, 2, -1}}};
  return SimplicialMesh::build(2, v, c);
}

inline SimplicialMesh two_triangles() {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  std::vector<std::array<int, 4>> c = {{{0, 1, 2, -1}}, {{0, 2, 3, -1}}};
  return SimplicialMesh::build(2, v, c);
}

inline SimplicialMesh single_tet() {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  std::vector<std::array<int, 4>> c = {{{0, 1, 2, 3}}};
  return SimplicialMesh::build(3, v, c);
}

inline SimplicialMesh perturbed_square(int n, double amplitude, unsigned long seed) {
  SimplicialMesh m = generate_unit_square(n);
  perturb(m, amplitude, seed);
  return m;
}

inline EGField random_field(const EGSpace& s, unsigned seed, bool zero_boundary = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  EGField f(s);
  for (int i = 0; i < s.n_velocity(); ++i) f.coeffs[i] = dist(rng);
  if (zero_boundary)
    for (int i = 0; i < s.n_cont(); ++i)
      if (s.dof_on_boundary(i)) f.coeffs[i] = 0.0;
  return f;
}

inline std::vector<Mat3> random_tensors(const EGSpace& s, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Mat3> X(s.mesh->n_cells(), Mat3::Zero());
  for (auto& t : X)
    for (int i = 0; i < s.dim; ++i)
      for (int j = 0; j < s.dim; ++j) t(i, j) = dist(rng);
  return X;
}

// Weak gradient recomputed with real facet quadrature: facet values are
// evaluated from both incident cells and averaged (one-sided on the
// boundary, under the requested convention). Independent of the midpoint
// shortcut inside WeakGradient::build.
inline Mat3 weak_gradient_oracle(const EGField& f, int cell, BoundaryValue conv,
                                 int degree = 3) {
  const EGSpace& s = *f.space;
  const SimplicialMesh& m = *s.mesh;
  const QuadratureRule& rule = facet_rule(m.dim, degree);
  Mat3 acc = Mat3::Zero();
  for (int k = 0; k <= s.dim; ++k) {
    const int fi = m.cell_facets[cell][k];
    const Facet& fa = m.facets[fi];
    const Vec3 n = m.normal_from(fi, cell);
    const double scale = fa.measure / reference_measure(rule.simplex_dim);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = facet_point(m, fi, rule.points[q]);
      Vec3 val;
      if (!fa.on_boundary()) {
        val = 0.5 * (f.eval(fa.cell_plus, x) + f.eval(fa.cell_minus, x));
      } else if (conv == BoundaryValue::FullTrace) {
        val = f.eval(cell, x);
      } else {
        val = f.continuous_at(cell, m.barycentric(cell, x));
      }
      acc += rule.weights[q] * scale * val * n.transpose();
    }
  }
  return acc / m.cell_measure[cell];
}

}  // namespace testsupport
