#include "stokeseg/quadrature.hpp"

#include <cmath>

namespace stokeseg {

namespace {

using Pt = std::array<double, 4>;

void push(QuadratureRule& r, const Pt& p, double w) {
  r.points.push_back(p);
  r.weights.push_back(w);
}

// Symmetric orbit helpers. Weights are per-point, normalized to sum to 1
// over the whole rule; the final scaling to the reference measure happens in
// finalize().
void tri_center(QuadratureRule& r, double w) { push(r, {1.0 / 3, 1.0 / 3, 1.0 / 3, 0}, w); }

void tri_orbit3(QuadratureRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  push(r, {b, a, a, 0}, w);
  push(r, {a, b, a, 0}, w);
  push(r, {a, a, b, 0}, w);
}

void tri_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  push(r, {a, b, c, 0}, w);
  push(r, {a, c, b, 0}, w);
  push(r, {b, a, c, 0}, w);
  push(r, {b, c, a, 0}, w);
  push(r, {c, a, b, 0}, w);
  push(r, {c, b, a, 0}, w);
}

void tet_center(QuadratureRule& r, double w) { push(r, {0.25, 0.25, 0.25, 0.25}, w); }

void tet_orbit4(QuadratureRule& r, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  push(r, {b, a, a, a}, w);
  push(r, {a, b, a, a}, w);
  push(r, {a, a, b, a}, w);
  push(r, {a, a, a, b}, w);
}

void tet_orbit6(QuadratureRule& r, double a, double w) {
  const double b = 0.5 - a;
  push(r, {a, a, b, b}, w);
  push(r, {a, b, a, b}, w);
  push(r, {a, b, b, a}, w);
  push(r, {b, a, a, b}, w);
  push(r, {b, a, b, a}, w);
  push(r, {b, b, a, a}, w);
}

void tet_orbit12(QuadratureRule& r, double a, double b, double c, double w) {
  // All distinct placements of b and c among four slots; a fills the rest.
  for (int ib = 0; ib < 4; ++ib)
    for (int ic = 0; ic < 4; ++ic) {
      if (ib == ic) continue;
      Pt p{a, a, a, a};
      p[ib] = b;
      p[ic] = c;
      push(r, p, w);
    }
}

QuadratureRule finalize(QuadratureRule r, int simplex_dim, int degree) {
  r.simplex_dim = simplex_dim;
  r.degree = degree;
  const double ref = reference_measure(simplex_dim);
  for (double& w : r.weights) w *= ref;
  return r;
}

QuadratureRule make_interval(int npts) {
  QuadratureRule r;
  switch (npts) {
    case 1:
      push(r, {0.5, 0.5, 0, 0}, 1.0);
      return finalize(std::move(r), 1, 1);
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      push(r, {0.5 + d, 0.5 - d, 0, 0}, 0.5);
      push(r, {0.5 - d, 0.5 + d, 0, 0}, 0.5);
      return finalize(std::move(r), 1, 3);
    }
    case 3: {
      const double d = 0.5 * std::sqrt(0.6);
      push(r, {0.5, 0.5, 0, 0}, 4.0 / 9.0);
      push(r, {0.5 + d, 0.5 - d, 0, 0}, 5.0 / 18.0);
      push(r, {0.5 - d, 0.5 + d, 0, 0}, 5.0 / 18.0);
      return finalize(std::move(r), 1, 5);
    }
    default: {
      const double x1 = 0.3399810435848563, w1 = 0.6521451548625461;
      const double x2 = 0.8611363115940526, w2 = 0.3478548451374538;
      push(r, {0.5 * (1 - x1), 0.5 * (1 + x1), 0, 0}, 0.5 * w1);
      push(r, {0.5 * (1 + x1), 0.5 * (1 - x1), 0, 0}, 0.5 * w1);
      push(r, {0.5 * (1 - x2), 0.5 * (1 + x2), 0, 0}, 0.5 * w2);
      push(r, {0.5 * (1 + x2), 0.5 * (1 - x2), 0, 0}, 0.5 * w2);
      return finalize(std::move(r), 1, 7);
    }
  }
}

QuadratureRule make_triangle(int degree) {
  QuadratureRule r;
  switch (degree) {
    case 1:
      tri_center(r, 1.0);
      return finalize(std::move(r), 2, 1);
    case 2:
      tri_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      return finalize(std::move(r), 2, 2);
    case 4:
      tri_orbit3(r, 0.445948490915965, 0.223381589678011);
      tri_orbit3(r, 0.091576213509771, 0.109951743655322);
      return finalize(std::move(r), 2, 4);
    case 5:
      tri_center(r, 0.225);
      tri_orbit3(r, 0.470142064105115, 0.132394152788506);
      tri_orbit3(r, 0.101286507323456, 0.125939180544827);
      return finalize(std::move(r), 2, 5);
    default:
      tri_orbit3(r, 0.249286745170910, 0.116786275726379);
      tri_orbit3(r, 0.063089014491502, 0.050844906370207);
      tri_orbit6(r, 0.053145049844816, 0.310352451033785, 0.082851075618374);
      return finalize(std::move(r), 2, 6);
  }
}

QuadratureRule make_tet(int degree) {
  QuadratureRule r;
  switch (degree) {
    case 1:
      tet_center(r, 1.0);
      return finalize(std::move(r), 3, 1);
    case 2:
      tet_orbit4(r, 0.1381966011250105, 0.25);
      return finalize(std::move(r), 3, 2);
    case 5:
      tet_orbit4(r, 0.3108859192633005, 0.1126879257180162);
      tet_orbit4(r, 0.0927352503108912, 0.0734930431163619);
      tet_orbit6(r, 0.0455037041256497, 0.0425460207770812);
      return finalize(std::move(r), 3, 5);
    default:
      tet_orbit4(r, 0.2146028712591517, 0.0399227502581679);
      tet_orbit4(r, 0.0406739585346113, 0.0100772110553207);
      tet_orbit4(r, 0.3223378901422757, 0.0553571815436544);
      tet_orbit12(r, 0.0636610018750175, 0.2696723314583159, 0.6030056647916491,
                  0.0482142857142857);
      return finalize(std::move(r), 3, 6);
  }
}

void check_degree(int degree) {
  if (degree < 1 || degree > 6)
    throw UnsupportedDegree("quadrature degree " + std::to_string(degree) +
                            " outside the stored range 1..6");
}

}  // namespace

double reference_measure(int simplex_dim) {
  switch (simplex_dim) {
    case 1:
      return 1.0;
    case 2:
      return 0.5;
    case 3:
      return 1.0 / 6.0;
    default:
      throw Error("reference_measure: bad simplex dimension");
  }
}

const QuadratureRule& simplex_rule(int dim, int degree) {
  check_degree(degree);
  if (dim == 2) {
    // Requested degree -> stored table (3 rides on the degree-4 table).
    static const QuadratureRule t1 = make_triangle(1);
    static const QuadratureRule t2 = make_triangle(2);
    static const QuadratureRule t4 = make_triangle(4);
    static const QuadratureRule t5 = make_triangle(5);
    static const QuadratureRule t6 = make_triangle(6);
    switch (degree) {
      case 1:
        return t1;
      case 2:
        return t2;
      case 3:
      case 4:
        return t4;
      case 5:
        return t5;
      default:
        return t6;
    }
  }
  if (dim == 3) {
    // No widely used all-positive degree-3/4 tet table exists, so those
    // requests ride on the 14-point degree-5 rule.
    static const QuadratureRule k1 = make_tet(1);
    static const QuadratureRule k2 = make_tet(2);
    static const QuadratureRule k5 = make_tet(5);
    static const QuadratureRule k6 = make_tet(6);
    switch (degree) {
      case 1:
        return k1;
      case 2:
        return k2;
      case 3:
      case 4:
      case 5:
        return k5;
      default:
        return k6;
    }
  }
  throw Error("simplex_rule: mesh dimension must be 2 or 3");
}

const QuadratureRule& facet_rule(int dim, int degree) {
  check_degree(degree);
  if (dim == 2) {
    static const QuadratureRule g1 = make_interval(1);
    static const QuadratureRule g2 = make_interval(2);
    static const QuadratureRule g3 = make_interval(3);
    static const QuadratureRule g4 = make_interval(4);
    if (degree <= 1) return g1;
    if (degree <= 3) return g2;
    if (degree <= 5) return g3;
    return g4;
  }
  if (dim == 3) return simplex_rule(2, degree);
  throw Error("facet_rule: mesh dimension must be 2 or 3");
}

Vec3 cell_point(const SimplicialMesh& mesh, int cell, const std::array<double, 4>& lambda) {
  const auto& c = mesh.cells[cell];
  Vec3 x = Vec3::Zero();
  for (int k = 0; k <= mesh.dim; ++k) x += lambda[k] * mesh.vertices[c[k]];
  return x;
}

Vec3 facet_point(const SimplicialMesh& mesh, int facet, const std::array<double, 4>& lambda) {
  const Facet& f = mesh.facets[facet];
  Vec3 x = Vec3::Zero();
  for (int k = 0; k < mesh.dim; ++k) x += lambda[k] * mesh.vertices[f.v[k]];
  return x;
}

double integrate_cell(const SimplicialMesh& mesh, int cell, const QuadratureRule& rule,
                      const std::function<double(const Vec3&)>& f) {
  const double scale = mesh.cell_measure[cell] / reference_measure(rule.simplex_dim);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    acc += rule.weights[q] * f(cell_point(mesh, cell, rule.points[q]));
  return scale * acc;
}

double integrate_facet(const SimplicialMesh& mesh, int facet, const QuadratureRule& rule,
                       const std::function<double(const Vec3&)>& f) {
  const double scale = mesh.facets[facet].measure / reference_measure(rule.simplex_dim);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    acc += rule.weights[q] * f(facet_point(mesh, facet, rule.points[q]));
  return scale * acc;
}

}  // namespace stokeseg
