#include "stokeseg/assembly.hpp"

#include <vector>

#include "stokeseg/quadrature.hpp"

namespace stokeseg {

namespace {

using Triplet = Eigen::Triplet<double>;

// A linear vector-valued function on a facet, stored by vertex values,
// tagged with the velocity DOF it belongs to.
struct FacetFn {
  int dof;
  std::array<Vec3, 3> vals;
};

// int_e f.g for two linear functions from their vertex values: the facet P1
// mass matrix is |e| (1 + delta_ij) / 6 on edges and / 12 on triangles.
double facet_p1_product(const SimplicialMesh& m, int facet, const std::array<Vec3, 3>& f,
                        const std::array<Vec3, 3>& g) {
  const double scale = m.facets[facet].measure / (m.dim == 2 ? 6.0 : 12.0);
  double acc = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) acc += (i == j ? 2.0 : 1.0) * f[i].dot(g[j]);
  return acc * scale;
}

// int_e of a linear function: |e| times its vertex-value mean.
Vec3 facet_p1_integral(const SimplicialMesh& m, int facet, const std::array<Vec3, 3>& f) {
  Vec3 mean = Vec3::Zero();
  for (int k = 0; k < m.dim; ++k) mean += f[k];
  return (m.facets[facet].measure / m.dim) * mean;
}

// Jump-side participants of a facet: [v] as linear vertex-valued functions.
// Interior: the two enrichments (continuous parts cancel). Boundary: the
// forms see only the enrichment trace, because the continuous part is
// imposed strongly and lifted, so its boundary mismatch is never penalized;
// full_boundary_trace adds the hats at the facet's vertices and is reserved
// for functionals that must reproduce an exact volume integral by parts
// (the gradient load), where dropping them would change the value.
std::vector<FacetFn> jump_functions(const EGSpace& s, int facet, bool full_boundary_trace) {
  const SimplicialMesh& m = *s.mesh;
  const Facet& fa = m.facets[facet];
  std::vector<FacetFn> out;
  auto psi_vals = [&](int cell) {
    std::array<Vec3, 3> v{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (int k = 0; k < m.dim; ++k) v[k] = m.vertices[fa.v[k]] - m.cell_centroid[cell];
    return v;
  };
  if (!fa.on_boundary()) {
    out.push_back({s.enr_dof(fa.cell_plus), psi_vals(fa.cell_plus)});
    FacetFn minus{s.enr_dof(fa.cell_minus), psi_vals(fa.cell_minus)};
    for (int k = 0; k < m.dim; ++k) minus.vals[k] = -minus.vals[k];
    out.push_back(minus);
  } else {
    if (full_boundary_trace)
      for (int k = 0; k < m.dim; ++k)
        for (int c = 0; c < s.dim; ++c) {
          FacetFn hat{s.cont_dof(c, fa.v[k]), {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()}};
          hat.vals[k][c] = 1.0;
          out.push_back(hat);
        }
    out.push_back({s.enr_dof(fa.cell_plus), psi_vals(fa.cell_plus)});
  }
  return out;
}

// Stabilization <h_e^-1 [w],[v]> over all facets, scaled by `weight`.
void add_penalty(const EGSpace& s, double weight, std::vector<Triplet>& trips) {
  const SimplicialMesh& m = *s.mesh;
  for (int e = 0; e < m.n_facets(); ++e) {
    const auto fns = jump_functions(s, e, false);
    const double w = weight / m.facets[e].h_e;
    for (const auto& a : fns)
      for (const auto& b : fns) {
        const double val = w * facet_p1_product(m, e, a.vals, b.vals);
        if (val != 0.0) trips.emplace_back(a.dof, b.dof, val);
      }
  }
}

// Divergence coupling B(t, dof), same matrix for both schemes. Built from
// the weak-gradient stencil: b(w, q) = sum_T q_T |T| div_w(w)|_T.
SpMat divergence_matrix(const EGSpace& s, const WeakGradient& wg) {
  std::vector<Triplet> trips;
  const SimplicialMesh& m = *s.mesh;
  for (int t = 0; t < m.n_cells(); ++t)
    for (const auto& [dof, tensor] : wg.cell_terms[t]) {
      const double val = m.cell_measure[t] * tensor.trace();
      if (val != 0.0) trips.emplace_back(t, dof, val);
    }
  SpMat B(s.n_pressure(), s.n_velocity());
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

SaddleSystem assemble_meg_impl(const EGSpace& s, const WeakGradient& wg, double nu,
                               double stab_weight) {
  const SimplicialMesh& m = *s.mesh;
  SaddleSystem sys;
  sys.space = &s;
  sys.nu = nu;

  std::vector<Triplet> trips;
  // (grad_w w, grad_w v): the stencil lists every DOF with support on t.
  for (int t = 0; t < m.n_cells(); ++t) {
    const auto& terms = wg.cell_terms[t];
    for (const auto& [di, ti] : terms)
      for (const auto& [dj, tj] : terms) {
        const double val = nu * m.cell_measure[t] * ti.cwiseProduct(tj).sum();
        if (val != 0.0) trips.emplace_back(di, dj, val);
      }
  }
  add_penalty(s, nu * stab_weight, trips);

  sys.A.resize(s.n_velocity(), s.n_velocity());
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.B = divergence_matrix(s, wg);

  sys.m = Vector::Zero(s.n_pressure());
  for (int t = 0; t < m.n_cells(); ++t) sys.m[t] = m.cell_measure[t];
  return sys;
}

}  // namespace

SaddleSystem assemble_meg(const EGSpace& s, const WeakGradient& wg, double nu) {
  return assemble_meg_impl(s, wg, nu, 1.0);
}

SaddleSystem assemble_meg_swept(const EGSpace& s, const WeakGradient& wg, double nu,
                                double rho_m) {
  if (!(rho_m > 0.0)) throw InvalidPenalty("rho_m must be positive");
  return assemble_meg_impl(s, wg, nu, rho_m);
}

SaddleSystem assemble_eg(const EGSpace& s, double nu, double rho) {
  if (!(rho > 0.0)) throw InvalidPenalty("penalty rho must be positive");
  const SimplicialMesh& m = *s.mesh;
  SaddleSystem sys;
  sys.space = &s;
  sys.nu = nu;

  std::vector<Triplet> trips;

  // Volume term (grad w, grad v) over the broken space. Cell DOFs are the
  // d(d+1) hats plus the enrichment, whose gradients are constant tensors.
  for (int t = 0; t < m.n_cells(); ++t) {
    const auto grads = barycentric_gradients(m, t);
    std::vector<std::pair<int, Mat3>> cell_dofs;
    for (int k = 0; k <= s.dim; ++k)
      for (int c = 0; c < s.dim; ++c) {
        Mat3 g = Mat3::Zero();
        g.row(c) = grads[k].transpose();
        cell_dofs.emplace_back(s.cont_dof(c, m.cells[t][k]), g);
      }
    Mat3 id = Mat3::Zero();
    for (int c = 0; c < s.dim; ++c) id(c, c) = 1.0;
    cell_dofs.emplace_back(s.enr_dof(t), id);

    for (const auto& [di, ti] : cell_dofs)
      for (const auto& [dj, tj] : cell_dofs) {
        const double val = nu * m.cell_measure[t] * ti.cwiseProduct(tj).sum();
        if (val != 0.0) trips.emplace_back(di, dj, val);
      }
  }

  // Consistency terms -<{grad w} n, [v]> - <{grad v} n, [w]>. For each facet
  // collect the one-sided constant gradients (halved on interior facets) and
  // pair them with the jump functions; each computed integral feeds both the
  // (jump, grad) and the transposed entry.
  for (int e = 0; e < m.n_facets(); ++e) {
    const Facet& fa = m.facets[e];
    const Vec3 n = fa.normal;
    std::vector<std::pair<int, Vec3>> flux;  // dof -> {grad phi} n on e
    auto add_cell_gradients = [&](int cell, double factor) {
      const auto grads = barycentric_gradients(m, cell);
      for (int k = 0; k <= s.dim; ++k)
        for (int c = 0; c < s.dim; ++c) {
          Vec3 gn = Vec3::Zero();
          gn[c] = factor * grads[k].dot(n);
          flux.emplace_back(s.cont_dof(c, m.cells[cell][k]), gn);
        }
      flux.emplace_back(s.enr_dof(cell), factor * n);  // grad psi = I
    };
    if (!fa.on_boundary()) {
      add_cell_gradients(fa.cell_plus, 0.5);
      add_cell_gradients(fa.cell_minus, 0.5);
    } else {
      add_cell_gradients(fa.cell_plus, 1.0);
    }

    const auto jumps = jump_functions(s, e, false);
    for (const auto& j : jumps) {
      const Vec3 jint = facet_p1_integral(m, e, j.vals);
      for (const auto& [gdof, gn] : flux) {
        const double val = -nu * jint.dot(gn);
        if (val != 0.0) {
          trips.emplace_back(j.dof, gdof, val);
          trips.emplace_back(gdof, j.dof, val);
        }
      }
    }
  }

  add_penalty(s, nu * rho, trips);

  sys.A.resize(s.n_velocity(), s.n_velocity());
  sys.A.setFromTriplets(trips.begin(), trips.end());

  // Divergence coupling by its own route: (div w, q) - <[w].n, {q}>.
  std::vector<Triplet> btrips;
  for (int t = 0; t < m.n_cells(); ++t) {
    const auto grads = barycentric_gradients(m, t);
    for (int k = 0; k <= s.dim; ++k)
      for (int c = 0; c < s.dim; ++c) {
        const double val = m.cell_measure[t] * grads[k][c];
        if (val != 0.0) btrips.emplace_back(t, s.cont_dof(c, m.cells[t][k]), val);
      }
    btrips.emplace_back(t, s.enr_dof(t), m.cell_measure[t] * s.dim);
  }
  for (int e = 0; e < m.n_facets(); ++e) {
    const Facet& fa = m.facets[e];
    for (const auto& j : jump_functions(s, e, false)) {
      const double jn = facet_p1_integral(m, e, j.vals).dot(fa.normal);
      if (jn == 0.0) continue;
      if (!fa.on_boundary()) {
        btrips.emplace_back(fa.cell_plus, j.dof, -0.5 * jn);
        btrips.emplace_back(fa.cell_minus, j.dof, -0.5 * jn);
      } else {
        btrips.emplace_back(fa.cell_plus, j.dof, -jn);
      }
    }
  }
  sys.B.resize(s.n_pressure(), s.n_velocity());
  sys.B.setFromTriplets(btrips.begin(), btrips.end());

  sys.m = Vector::Zero(s.n_pressure());
  for (int t = 0; t < m.n_cells(); ++t) sys.m[t] = m.cell_measure[t];
  return sys;
}

Vector assemble_load(const EGSpace& s, const VectorField& f) {
  const SimplicialMesh& m = *s.mesh;
  const QuadratureRule& rule = simplex_rule(s.dim, 5);
  Vector F = Vector::Zero(s.n_velocity());
  for (int t = 0; t < m.n_cells(); ++t) {
    const double scale = m.cell_measure[t] / reference_measure(s.dim);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& lam = rule.points[q];
      const Vec3 x = cell_point(m, t, lam);
      const Vec3 fx = rule.weights[q] * scale * f(x);
      for (int k = 0; k <= s.dim; ++k)
        for (int c = 0; c < s.dim; ++c)
          F[s.cont_dof(c, m.cells[t][k])] += fx[c] * lam[k];
      F[s.enr_dof(t)] += fx.dot(x - m.cell_centroid[t]);
    }
  }
  return F;
}

Vector assemble_gradient_load(const EGSpace& s, const ScalarField& phi) {
  const SimplicialMesh& m = *s.mesh;
  Vector F = Vector::Zero(s.n_velocity());

  // -(phi, div v)_T with the broken divergence of each cell DOF.
  const QuadratureRule& cell_rule = simplex_rule(s.dim, 5);
  for (int t = 0; t < m.n_cells(); ++t) {
    const double phi_int = integrate_cell(m, t, cell_rule, phi);
    const auto grads = barycentric_gradients(m, t);
    for (int k = 0; k <= s.dim; ++k)
      for (int c = 0; c < s.dim; ++c)
        F[s.cont_dof(c, m.cells[t][k])] -= phi_int * grads[k][c];
    F[s.enr_dof(t)] -= phi_int * s.dim;
  }

  // + <phi, [v].n_e> over all facets (continuous traces cancel pairwise on
  // interior facets, so the jump form captures the whole surface term). The
  // full one-sided trace is kept on boundary facets: together with the cell
  // term this reproduces (grad phi, v) exactly, which is the point.
  const QuadratureRule& f_rule = facet_rule(s.dim, 5);
  for (int e = 0; e < m.n_facets(); ++e) {
    const Facet& fa = m.facets[e];
    for (const auto& j : jump_functions(s, e, true)) {
      double acc = 0.0;
      const double scale = fa.measure / reference_measure(f_rule.simplex_dim);
      for (std::size_t q = 0; q < f_rule.size(); ++q) {
        const auto& lam = f_rule.points[q];
        Vec3 jval = Vec3::Zero();
        for (int k = 0; k < m.dim; ++k) jval += lam[k] * j.vals[k];
        acc += f_rule.weights[q] * scale * phi(facet_point(m, e, lam)) * jval.dot(fa.normal);
      }
      F[j.dof] += acc;
    }
  }
  return F;
}

EGField ReducedSystem::expand(const Vector& u_reduced) const {
  EGField u = lift;
  for (std::size_t i = 0; i < kept.size(); ++i) u.coeffs[kept[i]] += u_reduced[i];
  return u;
}

ReducedSystem apply_dirichlet(const SaddleSystem& sys, const Vector& F, const VectorField& g) {
  const EGSpace& s = *sys.space;
  const SimplicialMesh& m = *s.mesh;

  ReducedSystem rs{&s, sys.nu, {}, {}, {}, {}, {}, {}, sys.m, EGField(s)};
  rs.reduced_index.assign(s.n_velocity(), -1);
  for (int dof = 0; dof < s.n_velocity(); ++dof) {
    if (sys.space->dof_on_boundary(dof)) continue;
    rs.reduced_index[dof] = static_cast<int>(rs.kept.size());
    rs.kept.push_back(dof);
  }

  for (int v = 0; v < m.n_vertices(); ++v) {
    if (!m.vertex_on_boundary[v]) continue;
    const Vec3 gv = g(m.vertices[v]);
    for (int c = 0; c < s.dim; ++c) rs.lift.coeffs[s.cont_dof(c, v)] = gv[c];
  }

  const int nk = static_cast<int>(rs.kept.size());
  const Vector Alift = sys.A * rs.lift.coeffs;
  rs.F = Vector::Zero(nk);
  for (int i = 0; i < nk; ++i) rs.F[i] = F[rs.kept[i]] - Alift[rs.kept[i]];
  rs.Gp = -(sys.B * rs.lift.coeffs);

  std::vector<Triplet> atr, btr;
  for (int col = 0; col < sys.A.outerSize(); ++col) {
    const int rc = rs.reduced_index[col];
    if (rc < 0) continue;
    for (SpMat::InnerIterator it(sys.A, col); it; ++it) {
      const int rr = rs.reduced_index[static_cast<int>(it.row())];
      if (rr >= 0) atr.emplace_back(rr, rc, it.value());
    }
  }
  for (int col = 0; col < sys.B.outerSize(); ++col) {
    const int rc = rs.reduced_index[col];
    if (rc < 0) continue;
    for (SpMat::InnerIterator it(sys.B, col); it; ++it)
      btr.emplace_back(static_cast<int>(it.row()), rc, it.value());
  }
  rs.A.resize(nk, nk);
  rs.A.setFromTriplets(atr.begin(), atr.end());
  rs.B.resize(s.n_pressure(), nk);
  rs.B.setFromTriplets(btr.begin(), btr.end());
  return rs;
}

}  // namespace stokeseg
