#pragma once

#include <Eigen/Dense>
#include <vector>

#include "agpk/operator_sum.hpp"

namespace agpk {

enum class LanczosTermination {
  b_below_tolerance,  ///< Krylov space closed: b_n fell to the noise floor
  max_steps           ///< stopped by the step cap (coefficients still valid)
};

struct LanczosOptions {
  int max_steps = 100000;
  /// Termination threshold: stop when b_n <= tol * max(1, largest b seen).
  double tol = 1e-8;
  /// Retain the orthonormal Krylov basis operators O_0..O_K.
  bool keep_basis = false;
  /// Full two-pass Gram-Schmidt against all stored basis operators at every
  /// step (effective only when keep_basis is set; without the basis the
  /// iteration keeps the standard three-term sliding window).
  bool reorth = true;
};

struct KrylovData {
  /// Lanczos coefficients b_1..b_K, all above the termination tolerance.
  std::vector<double> b;
  /// O_0..O_K when requested, empty otherwise.
  std::vector<OperatorSum> basis;
  /// Krylov dimension K+1.
  int k_dim = 1;
  LanczosTermination terminated = LanczosTermination::b_below_tolerance;
};

/// Operator-space Lanczos iteration: starting from the normalized operator
/// o0, repeatedly applies the Liouvillian L(O) = [h, O], orthogonalizing via
/// the three-term recurrence A_n = L(O_{n-1}) - b_{n-1} O_{n-2} and
/// b_n = sqrt((A_n|A_n)).  The diagonal terms (O|L O) vanish identically for
/// the alternating Hermitian/anti-Hermitian basis this iteration produces, so
/// no diagonal subtraction appears.
/// Preconditions: (o0|o0) = 1 within 1e-10 and h Hermitian (within 1e-10);
/// violations throw config_error.
KrylovData lanczos(const OperatorSum& h, const OperatorSum& o0,
                   const LanczosOptions& opts = {});

struct PsiTable {
  std::vector<double> t;
  /// psi(i, n) = psi_n at t[i]; n = 0..K.
  Eigen::MatrixXd psi;
  /// max over grid points of |sum_n psi_n^2 - 1| (normalization drift).
  double max_norm_drift = 0.0;
};

/// Integrates the Krylov-chain amplitudes d/dt psi_n = -b_{n+1} psi_{n+1}
/// + b_n psi_{n-1} from psi_n(0) = delta_{n0} with a classic 4th-order
/// Runge-Kutta scheme (step bounded by 0.01/max(b) and by an accumulated
/// norm-drift budget of 1e-9).  psi_0(t) equals the autocorrelation C(t).
/// t_grid must be non-decreasing and start at a value >= 0.
PsiTable propagate_psi(const std::vector<double>& b,
                       const std::vector<double>& t_grid);

/// Even moments m_0, m_2, ..., m_{2*floor(order/2)} of the autocorrelation
/// function from Lanczos coefficients, computed as return probabilities of
/// the Jacobi-matrix walk ((T^{2n})_{00}, equivalently the Dyck-path sums).
/// Requires order <= 2 * len(b); m_0 = 1.
std::vector<double> moments_from_lanczos(const std::vector<double>& b,
                                         int order);

/// Inverse map: from even moments (m_0=1, m_2, ..., m_{2n}) recover
/// b_1..b_n via the moment recursion for orthogonal-polynomial recurrence
/// coefficients (all diagonal terms vanish by the even symmetry).  Throws
/// numerical_error when the sequence is not realizable (a squared
/// coefficient comes out non-positive).
std::vector<double> lanczos_from_moments(const std::vector<double>& m);

}  // namespace agpk
