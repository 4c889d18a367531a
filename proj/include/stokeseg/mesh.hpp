// Simplicial meshes (triangles / tets) with oriented facet topology.
//
// Facet bookkeeping fixes all sign conventions used downstream:
//  * the "plus" cell of a facet is the incident cell with the smaller index,
//    and the stored unit normal points from plus to minus (outward on the
//    boundary),
//  * facet vertices are stored in ascending global order, so any two cells
//    and any parametrization of the facet agree on its vertex list.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "stokeseg/types.hpp"

namespace stokeseg {

struct Facet {
  std::array<int, 3> v{{-1, -1, -1}};  // ascending vertex ids; v[2] unused in 2D
  int cell_plus = -1;                  // smaller incident cell index
  int cell_minus = -1;                 // -1 on the boundary
  Vec3 normal = Vec3::Zero();          // unit, plus -> minus (outward if boundary)
  Vec3 midpoint = Vec3::Zero();
  double measure = 0.0;                // length in 2D, area in 3D
  double h_e = 0.0;                    // measure^(1/(d-1))
  int marker = 0;                      // from file input; 0 when absent

  bool on_boundary() const { return cell_minus < 0; }
};

struct SimplicialMesh {
  int dim = 2;
  std::vector<Vec3> vertices;
  // Positively oriented vertex ids per cell; slot 3 is -1 in 2D.
  std::vector<std::array<int, 4>> cells;
  std::vector<Facet> facets;
  // Facet ids per cell; local facet k lies opposite local vertex k.
  std::vector<std::array<int, 4>> cell_facets;
  std::vector<double> cell_measure;
  std::vector<double> cell_diameter;
  std::vector<Vec3> cell_centroid;
  std::vector<char> vertex_on_boundary;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }
  int verts_per_cell() const { return dim + 1; }
  int verts_per_facet() const { return dim; }

  // Largest cell diameter; the "h" reported for the whole mesh.
  double max_diameter() const;

  // Outward unit normal of `facet` as seen from incident cell `cell`.
  Vec3 normal_from(int facet, int cell) const;

  // Barycentric coordinates of x in the given cell (dim+1 entries).
  std::array<double, 4> barycentric(int cell, const Vec3& x) const;

  // Assembles derived data (orientation fix, facets, normals, measures).
  // Throws TopologyError on degenerate cells or non-manifold connectivity.
  static SimplicialMesh build(int dim, std::vector<Vec3> vertices,
                              std::vector<std::array<int, 4>> cells,
                              bool fix_orientation = true);
};

// Structured generators. n is the number of subdivisions per unit length.
SimplicialMesh generate_unit_square(int n);   // 2n^2 triangles on (0,1)^2
SimplicialMesh generate_unit_cube(int n);     // 6n^3 tets on (0,1)^3
// (-1,1)^2 minus the closed quadrant [0,1] x [-1,0]; 6n^2 triangles.
SimplicialMesh generate_lshape(int n);

// Reads the ASCII .smesh format (dim / vertices / cells / boundary_markers
// sections). Throws ParseError with a line number on malformed input and
// TopologyError on bad connectivity.
SimplicialMesh load_mesh(const std::string& path);

// Displaces interior vertices by uniform offsets in [-a*h, a*h]^d where h is
// the shortest edge at the vertex. Keeps every cell positive by redrawing up
// to 100 times per vertex; throws PerturbationFoldover past that.
// Requires 0 <= amplitude < 0.5.
void perturb(SimplicialMesh& mesh, double amplitude, unsigned long seed);

// Per-cell shape quality 4*sqrt(3)*|T| / sum of squared edge lengths
// (equilateral triangle = 1). Defined for 2D meshes.
std::vector<double> mesh_quality(const SimplicialMesh& mesh);

// Gradients of the P1 barycentric basis on a cell (entry k pairs with local
// vertex k; z components are zero in 2D).
std::array<Vec3, 4> barycentric_gradients(const SimplicialMesh& mesh, int cell);

}  // namespace stokeseg
