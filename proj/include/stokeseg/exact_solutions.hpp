// Manufactured Stokes solutions for the experiment suite.
//
// Each problem carries analytic velocity, Jacobian, pressure and the matching
// body force f = -nu*lap(u) + grad(p), plus a mesh factory for its domain.
// Pressures keep their natural mean; error norms subtract `p_mean` because
// discrete pressures live in the zero-mean space.
#pragma once

#include <functional>
#include <string>

#include "stokeseg/spaces.hpp"

namespace stokeseg {

struct ExactSolution {
  std::string name;
  int dim = 2;
  double nu = 1.0;
  VectorField u;
  TensorField grad_u;
  ScalarField p;
  double p_mean = 0.0;
  VectorField f;
  VectorField g;  // Dirichlet data, the trace of u
  std::function<SimplicialMesh(int)> make_mesh;  // refinement level n -> mesh, h ~ 1/n
};

// Counter-rotating vortex on the unit square, velocity from a polynomial
// stream function (zero boundary trace), linear-in-each-variable pressure.
ExactSolution solution_vortex2d(double nu);

// Trigonometric divergence-free flow on the unit cube with nonzero boundary
// data and p = sin(pi x) sin(pi y) sin(pi z).
ExactSolution solution_cube3d(double nu);

// Trigonometric flow on the L-shaped domain with the kinked pressure |y|.
ExactSolution solution_lshape(double nu);

// Problem lookup for the CLI: vortex2d | cube3d | lshape | file:<path>. The
// file form loads the mesh once and pairs it with the dimension-matching
// analytic fields above (vortex2d in 2D, cube3d in 3D).
ExactSolution make_solution(const std::string& problem, double nu);

}  // namespace stokeseg
