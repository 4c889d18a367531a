#include <doctest.h>

#include <cmath>

#include "stokeseg/quadrature.hpp"
#include "stokeseg/weakcalc.hpp"
#include "support.hpp"

using namespace stokeseg;
using namespace testsupport;

TEST_CASE("dof layout: component-major continuous block, then enrichments") {
  SimplicialMesh m = generate_unit_square(2);
  EGSpace s(m);
  CHECK(s.n_cont() == 2 * m.n_vertices());
  CHECK(s.n_velocity() == 2 * m.n_vertices() + m.n_cells());
  CHECK(s.cont_dof(0, 3) == 3);
  CHECK(s.cont_dof(1, 3) == m.n_vertices() + 3);
  CHECK(s.enr_dof(0) == 2 * m.n_vertices());
  CHECK(s.dof_is_enrichment(s.enr_dof(0)));
  CHECK(!s.dof_is_enrichment(s.cont_dof(1, m.n_vertices() - 1)));

  // On a 2x2 square grid only the center vertex is interior.
  int n_boundary_dofs = 0;
  for (int i = 0; i < s.n_velocity(); ++i)
    if (s.dof_on_boundary(i)) ++n_boundary_dofs;
  CHECK(n_boundary_dofs == 2 * (m.n_vertices() - 1));
}

TEST_CASE("field evaluation: enrichment is radial from the centroid") {
  SimplicialMesh m = single_triangle();
  EGSpace s(m);
  EGField f(s);
  f.coeffs[s.enr_dof(0)] = 1.0;

  const Vec3 xt = m.cell_centroid[0];
  CHECK(f.eval(0, xt).norm() < 1e-15);  // psi vanishes at the centroid
  const double h = 0.125;
  const Vec3 val = f.eval(0, xt + Vec3(h, 0, 0));
  CHECK((val - Vec3(h, 0, 0)).norm() < 1e-15);

  // Broken gradient of the enrichment is the identity.
  Mat3 expect = Mat3::Zero();
  expect(0, 0) = expect(1, 1) = 1.0;
  CHECK((f.broken_gradient(0) - expect).norm() < 1e-15);
}

TEST_CASE("interpolant reproduces P1 fields with zero enrichment") {
  SimplicialMesh m = generate_unit_square(3);
  perturb(m, 0.2, 4);
  EGSpace s(m);
  Mat3 A = Mat3::Zero();
  A(0, 0) = 1.5;
  A(0, 1) = -0.5;
  A(1, 0) = 2.0;
  A(1, 1) = 0.25;
  const Vec3 b(0.1, -0.7, 0);
  EGField f = interpolate(
      s, [&](const Vec3& x) { return Vec3(A * x + b); }, [&](const Vec3&) { return A; });
  for (int t = 0; t < m.n_cells(); ++t) CHECK(std::abs(f.enrichment(t)) < 1e-13);
  for (int v = 0; v < m.n_vertices(); ++v)
    CHECK((f.continuous_at_vertex(v) - (A * m.vertices[v] + b)).norm() < 1e-13);
}

TEST_CASE("interpolant matches the independent divergence-average oracle") {
  SimplicialMesh m = generate_unit_square(2);
  EGSpace s(m);
  auto u = [](const Vec3& x) { return Vec3(x.x() * x.x(), 0, 0); };
  auto grad_u = [](const Vec3& x) {
    Mat3 g = Mat3::Zero();
    g(0, 0) = 2.0 * x.x();
    return g;
  };
  EGField f = interpolate(s, u, grad_u);

  // Oracle: c_T = (int_T div u - int_T div Pi_C u) / (d |T|), both integrals
  // by independent degree-6 quadrature of the nodal interpolant.
  const QuadratureRule& rule = simplex_rule(2, 6);
  for (int t = 0; t < m.n_cells(); ++t) {
    const auto grads = barycentric_gradients(m, t);
    Mat3 gc = Mat3::Zero();
    for (int k = 0; k < 3; ++k)
      gc += u(m.vertices[m.cells[t][k]]) * grads[k].transpose();
    const double div_u =
        integrate_cell(m, t, rule, [&](const Vec3& x) { return grad_u(x).trace(); });
    const double want = (div_u - gc.trace() * m.cell_measure[t]) / (2.0 * m.cell_measure[t]);
    CHECK(f.enrichment(t) == doctest::Approx(want).epsilon(1e-12));
  }

  // The divergence correction property the coefficient encodes:
  // (div Pi_h u, 1)_T = (div u, 1)_T.
  for (int t = 0; t < m.n_cells(); ++t) {
    const double div_interp = f.broken_gradient(t).trace() * m.cell_measure[t];
    const double div_exact =
        integrate_cell(m, t, rule, [&](const Vec3& x) { return grad_u(x).trace(); });
    CHECK(div_interp == doctest::Approx(div_exact).epsilon(1e-12));
  }
}

TEST_CASE("P0 projection is the cell average") {
  SimplicialMesh m = generate_unit_square(3);
  EGSpace s(m);
  PressureField p = project_p0(s, [](const Vec3& x) { return x.x(); });
  for (int t = 0; t < m.n_cells(); ++t)
    CHECK(p.values[t] == doctest::Approx(m.cell_centroid[t].x()).epsilon(1e-13));

  // Mean and de-meaning.
  CHECK(p.mean() == doctest::Approx(0.5).epsilon(1e-13));
  p.remove_mean();
  CHECK(std::abs(p.mean()) < 1e-14);

  // Single reference triangle: mean of x is the centroid coordinate 1/3.
  SimplicialMesh one = single_triangle();
  EGSpace s1(one);
  PressureField p1 = project_p0(s1, [](const Vec3& x) { return x.x(); });
  CHECK(p1.values[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("theta projection reproduces P1 and its facet/cell traces agree then") {
  SimplicialMesh m = generate_unit_square(2);
  EGSpace s(m);
  Mat3 A = Mat3::Zero();
  A(0, 1) = 2.0;
  A(1, 0) = -1.0;
  auto u = [&](const Vec3& x) { return Vec3(A * x + Vec3(1, 2, 0)); };
  ThetaProjection th = project_theta(s, u);

  for (int t = 0; t < m.n_cells(); ++t)
    for (int k = 0; k < 3; ++k)
      CHECK((th.cell_values[t][k] - u(m.vertices[m.cells[t][k]])).norm() < 1e-12);
  for (int e = 0; e < m.n_facets(); ++e)
    for (int k = 0; k < 2; ++k)
      CHECK((th.facet_values[e][k] - u(m.vertices[m.facets[e].v[k]])).norm() < 1e-12);

  // For a genuinely quadratic field the facet projection is NOT the trace of
  // the cell projection.
  auto uq = [](const Vec3& x) { return Vec3(x.x() * x.x(), 0, 0); };
  ThetaProjection thq = project_theta(s, uq);
  double max_gap = 0.0;
  for (int e = 0; e < m.n_facets(); ++e) {
    const Facet& fa = m.facets[e];
    const auto& cv = thq.cell_values[fa.cell_plus];
    for (int k = 0; k < 2; ++k) {
      // locate facet vertex in the plus cell
      for (int l = 0; l < 3; ++l)
        if (m.cells[fa.cell_plus][l] == fa.v[k])
          max_gap = std::max(max_gap, (thq.facet_values[e][k] - cv[l]).norm());
    }
  }
  CHECK(max_gap > 1e-4);
}

TEST_CASE("theta projection commutes: weak gradient equals cell-mean gradient") {
  // For smooth u, grad_w(Theta u) per cell equals the cell average of grad u.
  // Degree <= 5 polynomial data keeps every quadrature step exact, so the
  // identity holds to rounding.
  auto u2 = [](const Vec3& x) {
    const double X = x.x(), Y = x.y();
    return Vec3(X * X * Y - 2 * Y * Y * Y + X, X * Y * Y + 0.5 * X * X, 0);
  };
  auto grad_u2 = [](const Vec3& x) {
    const double X = x.x(), Y = x.y();
    Mat3 g = Mat3::Zero();
    g(0, 0) = 2 * X * Y + 1;
    g(0, 1) = X * X - 6 * Y * Y;
    g(1, 0) = Y * Y + X;
    g(1, 1) = 2 * X * Y;
    return g;
  };

  SimplicialMesh m = generate_unit_square(3);
  perturb(m, 0.2, 17);
  EGSpace s(m);
  ThetaProjection th = project_theta(s, u2);
  const QuadratureRule& rule = simplex_rule(2, 6);

  for (int t = 0; t < m.n_cells(); ++t) {
    // Weak gradient of the projected pair from facet data (integrals of the
    // linear facet values are |e| times their midpoint value).
    Mat3 got = Mat3::Zero();
    for (int k = 0; k <= m.dim; ++k) {
      const int fi = m.cell_facets[t][k];
      const Facet& fa = m.facets[fi];
      Vec3 mid = Vec3::Zero();
      for (int l = 0; l < m.dim; ++l) mid += th.facet_values[fi][l];
      mid /= m.dim;
      got += fa.measure * mid * m.normal_from(fi, t).transpose();
    }
    got /= m.cell_measure[t];

    Mat3 mean = Mat3::Zero();
    const double scale = m.cell_measure[t] / reference_measure(2);
    for (std::size_t q = 0; q < rule.size(); ++q)
      mean += rule.weights[q] * scale * grad_u2(cell_point(m, t, rule.points[q]));
    mean /= m.cell_measure[t];

    CHECK((got - mean).norm() < 1e-10);
  }
}
