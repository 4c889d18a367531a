// Direct solution of the reduced saddle-point problem.
//
// The mean-zero pressure constraint is a bordering row/column with weights
// m_T = |T| (no pressure pinning, which would distort the reported condition
// numbers). The assembled matrix is the symmetric indefinite
//     [ A   B^T  0 ]
//     [ B   0    m ]
//     [ 0   m^T  0 ]
// acting on (u, -p, lambda); the sign flip keeps the matrix symmetric and is
// undone when the pressure is extracted.
#pragma once

#include "stokeseg/assembly.hpp"

namespace stokeseg {

struct StokesSolution {
  EGField u;        // full coefficient field, boundary lift included
  PressureField p;  // de-meaned
  double residual = 0.0;  // relative algebraic residual of the augmented solve
};

SpMat build_augmented(const ReducedSystem& rs);

// Sparse LU with iterative refinement; throws SingularSystem on factorization
// breakdown and NonConvergence if the residual stays above 1e-10.
StokesSolution solve_stokes(const ReducedSystem& rs);

// 2-norm condition number sigma_max/sigma_min of a symmetric matrix by power
// iteration and inverse iteration through an LU factorization. Deterministic
// (fixed internal start vector). Throws BudgetExceeded above `budget` rows.
double condition_number(const SpMat& M, int budget = 200000);

}  // namespace stokeseg
