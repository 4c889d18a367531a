// Shared small types and the error hierarchy.
//
// Geometry runs in fixed 3-vectors with the z slot zeroed in 2D, so the same
// code paths serve triangles and tets without templating every class on the
// dimension. Frobenius products, traces and norms then come out right for
// free because the padding is exactly zero.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace stokeseg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (mesh files, CLI grids).
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Mesh connectivity that cannot describe a manifold simplicial complex.
struct TopologyError : Error {
  explicit TopologyError(const std::string& what) : Error(what) {}
};

// Random vertex displacement could not keep every incident cell positive.
struct PerturbationFoldover : Error {
  explicit PerturbationFoldover(const std::string& what) : Error(what) {}
};

// Quadrature request outside the stored tables.
struct UnsupportedDegree : Error {
  explicit UnsupportedDegree(const std::string& what) : Error(what) {}
};

// Bad method/parameter combination (e.g. a penalty handed to mEG).
struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& what) : Error(what) {}
};

// Penalty weight outside (0, inf).
struct InvalidPenalty : Error {
  explicit InvalidPenalty(const std::string& what) : Error(what) {}
};

// Local facet-moment system of a cell is numerically singular.
struct SingularLocalBDM : Error {
  explicit SingularLocalBDM(const std::string& what) : Error(what) {}
};

// Factorization breakdown of the saddle-point matrix.
struct SingularSystem : Error {
  explicit SingularSystem(const std::string& what) : Error(what) {}
};

// Solve finished but the algebraic residual stayed above contract.
struct NonConvergence : Error {
  explicit NonConvergence(const std::string& what) : Error(what) {}
};

// Condition-number estimation requested beyond its size budget.
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

}  // namespace stokeseg
