#pragma once

#include <vector>

#include "agpk/krylov.hpp"
#include "agpk/operator_sum.hpp"

namespace agpk {

/// Solution of the truncated gauge-potential system.  The expansion
/// coefficients of the adiabatic gauge potential over odd Krylov operators
/// are purely imaginary; a_k stores their imaginary parts, so the operator
/// is A = sum_k (i a_k) O_{2k+1} and its normalized squared norm is
/// sum_k a_k^2.
struct AgpSolution {
  std::vector<double> a;  ///< a_k, k = 0..n_trunc
  double mu = 0.0;
  long n_trunc = -1;      ///< N; -1 is the empty ansatz
  double norm_sq = 0.0;   ///< sum a_k^2 (normalized seed convention)
  bool normalization_applied = false;  ///< norm_sq scaled by ||dH||^2
};

/// Largest admissible truncation order for a chain of K coefficients:
/// M = (K-1)/2 for odd K, K/2 - 1 for even K, -1 for K = 0.
long max_truncation_order(std::size_t k_coeffs);

/// Solves T a = (-b_1, 0, ..., 0) with
///   diag_k = b_{2k+1}^2 + b_{2k+2}^2 + mu^2,
///   off_k  = b_{2k+2} b_{2k+3},
/// where b_i = 0 beyond the computed chain.  The system is symmetric
/// positive definite for mu > 0 and remains nonsingular at mu = 0 whenever
/// no diagonal entry vanishes; a singular mu = 0 system raises a numerical
/// error advising a positive regulator.  Only mu^2 enters, so mu and -mu
/// yield identical solutions.
AgpSolution solve_alpha(const std::vector<double>& b, double mu, long n_trunc);

/// Full-truncation convenience overload (n_trunc = max order).
AgpSolution solve_alpha(const std::vector<double>& b, double mu);

/// Physical squared norm: deformation_norm_sq * sum a_k^2.
double agp_norm_from_alpha(const AgpSolution& sol, double deformation_norm_sq);

/// Assembles A = sum_k (i a_k) O_{2k+1} from a retained Krylov basis.
/// Hermitian by construction (imaginary coefficients on anti-Hermitian
/// basis operators).
OperatorSum assemble_agp(const KrylovData& basis, const AgpSolution& sol);

/// Frobenius norm of [H, i dH + [H, A]] + mu^2 A — the regularized gauge
/// condition.  Vanishes (to solver precision) for an untruncated solution.
double gauge_residual(const OperatorSum& h, const OperatorSum& d_h_normalized,
                      const OperatorSum& a_op, double mu);

/// Variational action S(a) = 1 + 2 b_1 a_0 + a^T T(b, mu) a, minimized by
/// the solve_alpha solution; S(0) = 1.
double variational_action(const std::vector<double>& b,
                          const std::vector<double>& a, double mu);

/// Maximum absolute residual of the three-term coefficient recursion
/// (equivalently, of the rows of the tridiagonal system extended one row
/// past the truncation).  ~0 for full solutions; a truncated solution
/// reports the size of the first broken row rather than erroring.
double alpha_recursion_residual(const std::vector<double>& b,
                                const AgpSolution& sol);

}  // namespace agpk
