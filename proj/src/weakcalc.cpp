#include "stokeseg/weakcalc.hpp"

#include <algorithm>
#include <map>

namespace stokeseg {

WeakGradient WeakGradient::build(const EGSpace& s, BoundaryValue convention) {
  const SimplicialMesh& m = *s.mesh;
  WeakGradient wg;
  wg.space = &s;
  wg.convention = convention;
  wg.cell_terms.resize(m.n_cells());

  for (int t = 0; t < m.n_cells(); ++t) {
    std::map<int, Mat3> acc;
    const double inv_meas = 1.0 / m.cell_measure[t];

    for (int k = 0; k <= s.dim; ++k) {
      const int fi = m.cell_facets[t][k];
      const Facet& f = m.facets[fi];
      const Vec3 n = m.normal_from(fi, t);
      const double w = f.measure * inv_meas;

      // Continuous hats at the facet's vertices: the trace is the nodal hat
      // along the facet (average = trace by continuity), whose facet integral
      // is |e|/d. Nonzero only for vertices of the facet itself.
      for (int fv = 0; fv < s.dim; ++fv) {
        const int v = f.v[fv];
        for (int c = 0; c < s.dim; ++c) {
          Mat3 contrib = Mat3::Zero();
          contrib.row(c) = (w / s.dim) * n.transpose();
          auto [it, fresh] = acc.emplace(s.cont_dof(c, v), contrib);
          if (!fresh) it->second += contrib;
        }
      }

      // Enrichments. psi evaluated at the facet midpoint stands in for its
      // facet integral (both are linear).
      if (!f.on_boundary()) {
        const int other = (f.cell_plus == t) ? f.cell_minus : f.cell_plus;
        const Vec3 psi_own = f.midpoint - m.cell_centroid[t];
        const Vec3 psi_other = f.midpoint - m.cell_centroid[other];
        Mat3 own = 0.5 * w * psi_own * n.transpose();
        Mat3 nb = 0.5 * w * psi_other * n.transpose();
        auto [it1, f1] = acc.emplace(s.enr_dof(t), own);
        if (!f1) it1->second += own;
        auto [it2, f2] = acc.emplace(s.enr_dof(other), nb);
        if (!f2) it2->second += nb;
      } else if (convention == BoundaryValue::FullTrace) {
        const Vec3 psi_own = f.midpoint - m.cell_centroid[t];
        Mat3 own = w * psi_own * n.transpose();
        auto [it1, f1] = acc.emplace(s.enr_dof(t), own);
        if (!f1) it1->second += own;
      }
    }

    auto& terms = wg.cell_terms[t];
    terms.reserve(acc.size());
    for (auto& [dof, tensor] : acc) terms.emplace_back(dof, tensor);
  }
  return wg;
}

Mat3 WeakGradient::of_field(const EGField& f, int cell) const {
  Mat3 g = Mat3::Zero();
  for (const auto& [dof, tensor] : cell_terms[cell]) g += f.coeffs[dof] * tensor;
  return g;
}

double WeakGradient::divergence_of_field(const EGField& f, int cell) const {
  double d = 0.0;
  for (const auto& [dof, tensor] : cell_terms[cell]) d += f.coeffs[dof] * tensor.trace();
  return d;
}

std::array<Vec3, 3> jump_on_facet(const EGField& f, int facet) {
  const EGSpace& s = *f.space;
  const SimplicialMesh& m = *s.mesh;
  const Facet& fa = m.facets[facet];
  std::array<Vec3, 3> jump{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  const double cp = f.enrichment(fa.cell_plus);
  for (int k = 0; k < s.dim; ++k) {
    const Vec3& x = m.vertices[fa.v[k]];
    jump[k] = cp * (x - m.cell_centroid[fa.cell_plus]);
    if (!fa.on_boundary())
      jump[k] -= f.enrichment(fa.cell_minus) * (x - m.cell_centroid[fa.cell_minus]);
  }
  return jump;
}

namespace {

// int_e of a linear (vertex-valued) vector function = |e| * midpoint value.
Vec3 facet_integral(const SimplicialMesh& m, int facet, const std::array<Vec3, 3>& vals) {
  Vec3 mean = Vec3::Zero();
  for (int k = 0; k < m.dim; ++k) mean += vals[k];
  return (m.facets[facet].measure / m.dim) * mean;
}

}  // namespace

std::pair<double, double> strong_weak_residual(const WeakGradient& wg, const EGField& f,
                                               const std::vector<Mat3>& X) {
  const EGSpace& s = *wg.space;
  const SimplicialMesh& m = *s.mesh;

  double lhs = 0.0;
  for (int t = 0; t < m.n_cells(); ++t) {
    const Mat3 diff = f.broken_gradient(t) - wg.of_field(f, t);
    lhs += m.cell_measure[t] * diff.cwiseProduct(X[t]).sum();
  }

  double rhs = 0.0;
  for (int e = 0; e < m.n_facets(); ++e) {
    const Facet& fa = m.facets[e];
    Mat3 avg = X[fa.cell_plus];
    if (!fa.on_boundary()) avg = 0.5 * (avg + X[fa.cell_minus]);
    const Vec3 flux = avg * fa.normal;
    rhs += facet_integral(m, e, jump_on_facet(f, e)).dot(flux);
  }
  return {lhs, rhs};
}

std::pair<double, double> strong_weak_divergence_residual(const WeakGradient& wg,
                                                          const EGField& f,
                                                          const std::vector<double>& q) {
  std::vector<Mat3> X(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) X[t] = q[t] * Mat3::Identity();
  // (grad v - grad_w v) : qI = (div v - div_w v) q and [v].(qI n) = ([v].n) q,
  // so the tensor identity specializes directly.
  auto [lhs, rhs] = strong_weak_residual(wg, f, X);
  // The padded z-diagonal of the identity is annihilated because every
  // gradient's third row/column is zero in 2D.
  return {lhs, rhs};
}

}  // namespace stokeseg
