#pragma once

#include <vector>

namespace agpk::la {

// Solves the real symmetric tridiagonal system
//   diag[i] x[i] + off[i-1] x[i-1] + off[i] x[i+1] = rhs[i],  i = 0..n-1,
// (off has length n-1) by the Thomas algorithm followed by one step of
// iterative refinement.  Throws numerical_error when a pivot (effectively)
// vanishes, with guidance to use a positive regulator.
std::vector<double> tridiag_solve(const std::vector<double>& diag,
                                  const std::vector<double>& off,
                                  const std::vector<double>& rhs);

// Infinity norm of the residual T x - rhs for the same system shape.
double tridiag_residual_inf(const std::vector<double>& diag,
                            const std::vector<double>& off,
                            const std::vector<double>& rhs,
                            const std::vector<double>& x);

}  // namespace agpk::la
