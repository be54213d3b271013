// Sparse complex linear algebra: CSR storage and a restarted GMRES with
// modified Gram-Schmidt and Givens rotations.  Optional right Jacobi
// preconditioning keeps the reported residual equal to the true residual.
#ifndef NLSFV_GMRES_HPP
#define NLSFV_GMRES_HPP

#include <vector>

#include "nlsfv/numeric.hpp"

namespace nlsfv {

struct SparseComplexMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  std::vector<cdouble> val;

  void multiply(const std::vector<cdouble>& x, std::vector<cdouble>& y) const;
  std::vector<cdouble> diagonal() const;
};

struct GmresOptions {
  double tol = 1e-10;  // relative residual ||b - Ax|| / ||b||
  int restart = 50;
  int max_iters = 10000;  // total Krylov iterations across restarts
  bool jacobi = false;
};

struct GmresResult {
  std::vector<cdouble> x;
  int iterations = 0;
  double residual = 0.0;  // achieved relative residual
  bool converged = false;
};

// Solves A x = b from initial guess x0.  Returns converged=false (with the
// best iterate) when the iteration budget runs out; callers decide whether
// that is fatal.
GmresResult gmres_solve(const SparseComplexMatrix& A, const std::vector<cdouble>& b,
                        const std::vector<cdouble>& x0, const GmresOptions& opts);

}  // namespace nlsfv

#endif
