#include "stokeseg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace stokeseg {

namespace {

// Signed measure of the simplex spanned by pts[0..dim]; positive when the
// vertex order matches the orientation convention (counterclockwise in 2D,
// right-handed in 3D).
double signed_measure(int dim, const Vec3* pts) {
  if (dim == 2) {
    const Vec3 a = pts[1] - pts[0];
    const Vec3 b = pts[2] - pts[0];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  const Vec3 a = pts[1] - pts[0];
  const Vec3 b = pts[2] - pts[0];
  const Vec3 c = pts[3] - pts[0];
  return a.cross(b).dot(c) / 6.0;
}

double facet_measure(int dim, const Vec3* pts) {
  if (dim == 2) return (pts[1] - pts[0]).norm();
  return 0.5 * (pts[1] - pts[0]).cross(pts[2] - pts[0]).norm();
}

}  // namespace

double SimplicialMesh::max_diameter() const {
  double h = 0.0;
  for (double d : cell_diameter) h = std::max(h, d);
  return h;
}

Vec3 SimplicialMesh::normal_from(int facet, int cell) const {
  const Facet& f = facets[facet];
  return cell == f.cell_plus ? f.normal : Vec3(-f.normal);
}

std::array<double, 4> SimplicialMesh::barycentric(int cell, const Vec3& x) const {
  // Solve the affine system v0 + J*lambda_rest = x; lambda_0 closes to 1.
  const auto& c = cells[cell];
  Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= dim; ++k) J.col(k - 1) = vertices[c[k]] - vertices[c[0]];
  if (dim == 2) J.col(2) = Vec3(0, 0, 1);  // keep the system invertible
  const Vec3 rhs = x - vertices[c[0]];
  const Vec3 lam = J.partialPivLu().solve(rhs);
  std::array<double, 4> out{{0.0, 0.0, 0.0, 0.0}};
  double l0 = 1.0;
  for (int k = 1; k <= dim; ++k) {
    out[k] = lam[k - 1];
    l0 -= lam[k - 1];
  }
  out[0] = l0;
  return out;
}

SimplicialMesh SimplicialMesh::build(int dim, std::vector<Vec3> vertices,
                                     std::vector<std::array<int, 4>> cells,
                                     bool fix_orientation) {
  if (dim != 2 && dim != 3) throw Error("mesh dimension must be 2 or 3");
  SimplicialMesh m;
  m.dim = dim;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);

  const int nv = m.n_vertices();
  const int nc = m.n_cells();
  const int vpc = dim + 1;

  m.cell_measure.resize(nc);
  m.cell_diameter.resize(nc);
  m.cell_centroid.resize(nc);
  for (int t = 0; t < nc; ++t) {
    auto& cell = m.cells[t];
    for (int k = 0; k < vpc; ++k) {
      if (cell[k] < 0 || cell[k] >= nv)
        throw TopologyError("cell " + std::to_string(t) + " references vertex " +
                            std::to_string(cell[k]) + " out of range");
      for (int l = k + 1; l < vpc; ++l)
        if (cell[k] == cell[l])
          throw TopologyError("cell " + std::to_string(t) + " repeats vertex " +
                              std::to_string(cell[k]));
    }
    Vec3 pts[4];
    for (int k = 0; k < vpc; ++k) pts[k] = m.vertices[cell[k]];
    double s = signed_measure(dim, pts);
    if (s < 0.0 && fix_orientation) {
      std::swap(cell[1], cell[2]);
      std::swap(pts[1], pts[2]);
      s = -s;
    }
    if (s <= 0.0)
      throw TopologyError("cell " + std::to_string(t) + " is degenerate or inverted");
    m.cell_measure[t] = s;

    Vec3 centroid = Vec3::Zero();
    double diam = 0.0;
    for (int k = 0; k < vpc; ++k) {
      centroid += pts[k];
      for (int l = k + 1; l < vpc; ++l) diam = std::max(diam, (pts[k] - pts[l]).norm());
    }
    m.cell_centroid[t] = centroid / vpc;
    m.cell_diameter[t] = diam;
  }

  // Facets keyed by their sorted vertex ids. Local facet k of a cell is the
  // one opposite local vertex k.
  std::map<std::array<int, 3>, int> facet_of;
  m.cell_facets.assign(nc, {{-1, -1, -1, -1}});
  for (int t = 0; t < nc; ++t) {
    for (int k = 0; k < vpc; ++k) {
      std::array<int, 3> key{{-1, -1, -1}};
      int w = 0;
      for (int l = 0; l < vpc; ++l)
        if (l != k) key[w++] = m.cells[t][l];
      std::sort(key.begin(), key.begin() + dim);
      auto it = facet_of.find(key);
      if (it == facet_of.end()) {
        Facet f;
        f.v = key;
        f.cell_plus = t;
        facet_of.emplace(key, m.n_facets());
        m.cell_facets[t][k] = m.n_facets();
        m.facets.push_back(f);
      } else {
        Facet& f = m.facets[it->second];
        if (f.cell_minus >= 0)
          throw TopologyError("facet shared by more than two cells (cells " +
                              std::to_string(f.cell_plus) + ", " +
                              std::to_string(f.cell_minus) + ", " + std::to_string(t) + ")");
        // Keep the smaller cell index on the plus side.
        if (t < f.cell_plus) {
          f.cell_minus = f.cell_plus;
          f.cell_plus = t;
        } else {
          f.cell_minus = t;
        }
        m.cell_facets[t][k] = it->second;
      }
    }
  }

  for (Facet& f : m.facets) {
    Vec3 pts[3];
    for (int k = 0; k < dim; ++k) pts[k] = m.vertices[f.v[k]];
    f.measure = facet_measure(dim, pts);
    if (f.measure <= 0.0) throw TopologyError("degenerate facet");
    f.h_e = dim == 2 ? f.measure : std::sqrt(f.measure);
    f.midpoint = Vec3::Zero();
    for (int k = 0; k < dim; ++k) f.midpoint += pts[k];
    f.midpoint /= dim;

    Vec3 n;
    if (dim == 2) {
      const Vec3 t = pts[1] - pts[0];
      n = Vec3(t.y(), -t.x(), 0.0);
    } else {
      n = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
    }
    n.normalize();
    // Point it out of the plus cell.
    if (n.dot(f.midpoint - m.cell_centroid[f.cell_plus]) < 0.0) n = -n;
    f.normal = n;
  }

  m.vertex_on_boundary.assign(nv, 0);
  for (const Facet& f : m.facets)
    if (f.on_boundary())
      for (int k = 0; k < dim; ++k) m.vertex_on_boundary[f.v[k]] = 1;

  return m;
}

SimplicialMesh generate_unit_square(int n) {
  if (n < 1) throw Error("generate_unit_square: n must be positive");
  std::vector<Vec3> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(double(i) / n, double(j) / n, 0.0);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::array<int, 4>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Split along the (i,j)-(i+1,j+1) diagonal.
      cells.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), -1}});
      cells.push_back({{vid(i, j), vid(i + 1, j + 1), vid(i, j + 1), -1}});
    }
  return SimplicialMesh::build(2, std::move(verts), std::move(cells));
}

SimplicialMesh generate_unit_cube(int n) {
  if (n < 1) throw Error("generate_unit_cube: n must be positive");
  std::vector<Vec3> verts;
  verts.reserve((n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.emplace_back(double(i) / n, double(j) / n, double(k) / n);
  auto vid = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };

  // Kuhn split: one tet per permutation of the axes, walking from the low
  // corner to the high corner of each subcube. Neighboring cubes agree on
  // the induced face triangulations.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<int, 4>> cells;
  cells.reserve(6 * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          std::array<int, 4> tet{};
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[p[s]] += 1;
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          cells.push_back(tet);
        }
  return SimplicialMesh::build(3, std::move(verts), std::move(cells));
}

SimplicialMesh generate_lshape(int n) {
  if (n < 1) throw Error("generate_lshape: n must be positive");
  // Grid over (-1,1)^2 with spacing 1/n, dropping the quadrant [0,1]x[-1,0].
  const int N = 2 * n;
  std::vector<int> id(std::size_t((N + 1) * (N + 1)), -1);
  std::vector<Vec3> verts;
  auto keep_vertex = [&](int i, int j) {
    const double x = -1.0 + double(i) / n;
    const double y = -1.0 + double(j) / n;
    return !(x > 0.0 && y < 0.0);  // grid point strictly inside the removed quadrant
  };
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      if (keep_vertex(i, j)) {
        id[j * (N + 1) + i] = static_cast<int>(verts.size());
        verts.emplace_back(-1.0 + double(i) / n, -1.0 + double(j) / n, 0.0);
      }
  auto vid = [&](int i, int j) { return id[j * (N + 1) + i]; };

  std::vector<std::array<int, 4>> cells;
  cells.reserve(6 * n * n);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const double cx = -1.0 + (i + 0.5) / n;
      const double cy = -1.0 + (j + 0.5) / n;
      if (cx > 0.0 && cy < 0.0) continue;  // removed quadrant
      cells.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), -1}});
      cells.push_back({{vid(i, j), vid(i + 1, j + 1), vid(i, j + 1), -1}});
    }
  return SimplicialMesh::build(2, std::move(verts), std::move(cells));
}

SimplicialMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);

  int dim = 0;
  std::vector<Vec3> verts;
  std::vector<std::array<int, 4>> cells;
  struct MarkerLine {
    std::array<int, 3> v;
    int marker;
  };
  std::vector<MarkerLine> markers;

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) -> void {
    throw ParseError(path + ":" + std::to_string(lineno) + ": " + why);
  };
  auto next_data_line = [&](std::istringstream& out) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  };

  std::istringstream ls;
  while (next_data_line(ls)) {
    std::string key;
    ls >> key;
    if (key == "dim") {
      if (!(ls >> dim) || (dim != 2 && dim != 3)) fail("dim must be 2 or 3");
    } else if (key == "vertices") {
      long count = -1;
      if (!(ls >> count) || count < 0) fail("bad vertex count");
      if (dim == 0) fail("dim must come before vertices");
      verts.reserve(count);
      for (long i = 0; i < count; ++i) {
        std::istringstream vl;
        if (!next_data_line(vl)) fail("unexpected end of file in vertex list");
        Vec3 p = Vec3::Zero();
        for (int k = 0; k < dim; ++k)
          if (!(vl >> p[k])) fail("expected " + std::to_string(dim) + " coordinates");
        verts.push_back(p);
      }
    } else if (key == "cells") {
      long count = -1;
      if (!(ls >> count) || count < 0) fail("bad cell count");
      if (dim == 0) fail("dim must come before cells");
      cells.reserve(count);
      for (long i = 0; i < count; ++i) {
        std::istringstream cl;
        if (!next_data_line(cl)) fail("unexpected end of file in cell list");
        std::array<int, 4> c{{-1, -1, -1, -1}};
        for (int k = 0; k <= dim; ++k)
          if (!(cl >> c[k])) fail("expected " + std::to_string(dim + 1) + " vertex ids");
        cells.push_back(c);
      }
    } else if (key == "boundary_markers") {
      long count = -1;
      if (!(ls >> count) || count < 0) fail("bad marker count");
      if (dim == 0) fail("dim must come before boundary_markers");
      for (long i = 0; i < count; ++i) {
        std::istringstream ml;
        if (!next_data_line(ml)) fail("unexpected end of file in marker list");
        MarkerLine rec{{{-1, -1, -1}}, 0};
        for (int k = 0; k < dim; ++k)
          if (!(ml >> rec.v[k])) fail("expected " + std::to_string(dim) + " vertex ids");
        if (!(ml >> rec.marker)) fail("expected a marker value");
        std::sort(rec.v.begin(), rec.v.begin() + dim);
        markers.push_back(rec);
      }
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (dim == 0) fail("missing dim section");
  if (verts.empty()) fail("missing vertices section");
  if (cells.empty()) fail("missing cells section");

  SimplicialMesh m = SimplicialMesh::build(dim, std::move(verts), std::move(cells));

  if (!markers.empty()) {
    std::map<std::array<int, 3>, int> lookup;
    for (int f = 0; f < m.n_facets(); ++f) lookup.emplace(m.facets[f].v, f);
    for (const auto& rec : markers) {
      auto it = lookup.find(rec.v);
      if (it == lookup.end())
        throw ParseError(path + ": boundary marker names a facet that does not exist");
      m.facets[it->second].marker = rec.marker;
    }
  }
  return m;
}

void perturb(SimplicialMesh& mesh, double amplitude, unsigned long seed) {
  if (amplitude < 0.0 || amplitude >= 0.5)
    throw Error("perturb: amplitude must lie in [0, 0.5)");
  if (amplitude == 0.0) return;

  const int dim = mesh.dim;
  const int vpc = dim + 1;

  // Shortest incident edge per vertex (from the unperturbed geometry) sets
  // the local displacement scale.
  std::vector<double> local_h(mesh.n_vertices(), std::numeric_limits<double>::max());
  for (const auto& cell : mesh.cells)
    for (int a = 0; a < vpc; ++a)
      for (int b = a + 1; b < vpc; ++b) {
        const double len = (mesh.vertices[cell[a]] - mesh.vertices[cell[b]]).norm();
        local_h[cell[a]] = std::min(local_h[cell[a]], len);
        local_h[cell[b]] = std::min(local_h[cell[b]], len);
      }

  std::vector<std::vector<int>> cells_at_vertex(mesh.n_vertices());
  for (int t = 0; t < mesh.n_cells(); ++t)
    for (int k = 0; k < vpc; ++k) cells_at_vertex[mesh.cells[t][k]].push_back(t);

  std::mt19937_64 rng(seed);
  std::vector<Vec3> pos = mesh.vertices;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.vertex_on_boundary[v]) continue;
    const double a = amplitude * local_h[v];
    std::uniform_real_distribution<double> dist(-a, a);
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      Vec3 cand = mesh.vertices[v];
      for (int k = 0; k < dim; ++k) cand[k] += dist(rng);
      bool ok = true;
      for (int t : cells_at_vertex[v]) {
        Vec3 pts[4];
        for (int k = 0; k < vpc; ++k) {
          const int w = mesh.cells[t][k];
          pts[k] = (w == v) ? cand : pos[w];
        }
        double s = 0.0;
        if (dim == 2) {
          const Vec3 e1 = pts[1] - pts[0], e2 = pts[2] - pts[0];
          s = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
        } else {
          s = (pts[1] - pts[0]).cross(pts[2] - pts[0]).dot(pts[3] - pts[0]) / 6.0;
        }
        if (s <= 0.0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        pos[v] = cand;
        placed = true;
      }
    }
    if (!placed)
      throw PerturbationFoldover("vertex " + std::to_string(v) +
                                 ": no valid displacement in 100 draws");
  }

  mesh = SimplicialMesh::build(dim, std::move(pos), std::move(mesh.cells),
                               /*fix_orientation=*/false);
}

std::array<Vec3, 4> barycentric_gradients(const SimplicialMesh& mesh, int cell) {
  const auto& c = mesh.cells[cell];
  Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= mesh.dim; ++k) J.col(k - 1) = mesh.vertices[c[k]] - mesh.vertices[c[0]];
  if (mesh.dim == 2) J.col(2) = Vec3(0, 0, 1);
  // Row k of J^{-1} is grad(lambda_{k+1}); the padding row stays out of the
  // result, and grad(lambda_0) closes the partition of unity.
  const Eigen::Matrix3d Jinv = J.inverse();
  std::array<Vec3, 4> g{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  for (int k = 1; k <= mesh.dim; ++k) {
    g[k] = Jinv.row(k - 1).transpose();
    g[0] -= g[k];
  }
  return g;
}

std::vector<double> mesh_quality(const SimplicialMesh& mesh) {
  if (mesh.dim != 2) throw Error("mesh_quality is defined for 2D meshes");
  std::vector<double> q(mesh.n_cells());
  const double scale = 4.0 * std::sqrt(3.0);
  for (int t = 0; t < mesh.n_cells(); ++t) {
    const auto& c = mesh.cells[t];
    double ssq = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        ssq += (mesh.vertices[c[a]] - mesh.vertices[c[b]]).squaredNorm();
    q[t] = scale * mesh.cell_measure[t] / ssq;
  }
  return q;
}

}  // namespace stokeseg
