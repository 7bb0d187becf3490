#pragma once

#include "treewalk/dense.hpp"

namespace treewalk {

struct SymEig {
  std::vector<double> values;  // ascending
  RMatrix vectors;             // column k is the eigenvector of values[k]
};

struct HermEig {
  std::vector<double> values;  // ascending
  DMatrix vectors;
};

struct UnitaryEig {
  std::vector<cplx> values;
  DMatrix vectors;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass falls under
// off_tol relative to the matrix norm.
SymEig jacobi_symmetric(RMatrix a, double off_tol = 1e-13, int max_sweeps = 60);
HermEig jacobi_hermitian(DMatrix a, double off_tol = 1e-13, int max_sweeps = 60);

// Eigendecomposition of a unitary matrix via the commuting Hermitian pair
// H = (U + U*)/2 and K = (U - U*)/(2i): diagonalize H, then split each
// eigenvalue cluster of H by diagonalizing K restricted to it.
UnitaryEig eig_unitary(const DMatrix& u, double cluster_tol = 1e-9);

}  // namespace treewalk
