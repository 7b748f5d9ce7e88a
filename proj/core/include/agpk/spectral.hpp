#pragma once

#include <cstdint>
#include <vector>

#include "agpk/exact_oracle.hpp"
#include "agpk/krylov.hpp"
#include "agpk/operator_sum.hpp"

namespace agpk {

/// The orbit of an operator under the Liouvillian, reduced to its frequency
/// content: weights w_nu over distinct Bohr frequencies omega_nu, with
/// sum w_nu = (O0|O0).  The Liouvillian acts on this representation as the
/// diagonal matrix diag(omega), which turns operator-space Lanczos into an
/// ordinary (and much cheaper) vector iteration.
struct FrequencyNodes {
  std::vector<double> omega;   ///< node frequencies, ascending
  std::vector<double> weight;  ///< w_nu > 0
  double total_weight = 0.0;   ///< sum of weights before the tiny-weight drop
  Eigen::Index dim = 0;        ///< Hilbert-space dimension D

  /// Retained spectral data for dense assembly.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  Eigen::MatrixXcd m0;  ///< V^dag O0 V

  /// Pair index m*dim+n -> node index (or -1 for dropped/weightless groups);
  /// filled only when requested.
  std::vector<std::int32_t> node_of_pair;
};

/// Collapses (h, o0) to the frequency measure.  Pairs are merged when their
/// Bohr frequencies agree within 1e-12 * max(1, spectral range), and nodes
/// carrying less than 1e-24 of the total weight are dropped.  o0 must be
/// normalized: (o0|o0) = 1 within 1e-8.
FrequencyNodes frequency_nodes(const OperatorSum& h, const OperatorSum& o0,
                               bool keep_pair_map = false,
                               Eigen::Index dim_cap = 4096);

struct SpectralLanczosOptions {
  /// Step cap; < 0 means run to closure (node count + margin).
  long max_steps = -1;
  double tol = 1e-8;
  /// Return the Lanczos vectors (needed for assembly / residual targets).
  /// Full reorthogonalization stores them internally regardless.
  bool keep_vectors = false;

  /// Functional early stop (disabled when mu < 0): every `check_interval`
  /// accepted steps, solve the gauge-potential system from the current
  /// coefficient prefix; stop once the squared-norm's relative change stays
  /// below `norm_rel_change` for `stable_checks` consecutive checks (when
  /// norm_rel_change > 0), or once the node-space gauge residual of the
  /// assembled solution drops below `residual_target` (when > 0).
  double mu = -1.0;
  double norm_rel_change = 0.0;
  int stable_checks = 3;
  double residual_target = 0.0;
  int check_interval = 25;
  long min_steps = 100;
};

struct SpectralLanczosResult {
  KrylovData krylov;        ///< coefficients only; basis left empty
  Eigen::MatrixXd vectors;  ///< node-space Lanczos vectors u_0..u_K (columns)
                            ///< when keep_vectors is set
  bool functional_stop = false;  ///< stopped by a functional monitor
};

/// Lanczos on diag(omega) with start vector sqrt(w)/||sqrt(w)||, full
/// two-pass reorthogonalization at every step.  Produces the same b_n as
/// operator-space lanczos() on (h, o0) because the node representation is an
/// exact unitary image of the operator orbit.
SpectralLanczosResult spectral_lanczos(const FrequencyNodes& nodes,
                                       const SpectralLanczosOptions& opts = {});

/// Node-space solution vector s_nu = sum_k a_k u_{2k+1}[nu] (the assembled
/// gauge potential is A_mn = i s_nu(m,n) M0_mn / sqrt(w_nu)).  Requires
/// vectors retained and 2k+1 <= K for all k.
Eigen::VectorXd node_solution(const SpectralLanczosResult& lan,
                              const std::vector<double>& a);

/// Gauge residual || [H, i O0 + [H, A]] + mu^2 A ||_F evaluated exactly in
/// the node representation:
///   sqrt(D * sum_nu (omega_nu sqrt(w_nu) + (omega_nu^2 + mu^2) s_nu)^2).
double node_gauge_residual(const FrequencyNodes& nodes,
                           const Eigen::VectorXd& s, double mu);

/// Dense gauge-potential operator in the original basis from a node-space
/// solution.  Requires the pair map.
OperatorSum assemble_agp_dense(const FrequencyNodes& nodes,
                               const Eigen::VectorXd& s);

/// Structural Krylov dimension of the collective-spin quadrupole deformation:
/// the Hamiltonian commutes with spin-flip parity and the deformation is
/// parity-even, so the frequency support consists of within-parity-block
/// gaps plus the zero mode.  Diagonalizing the two parity blocks separately
/// avoids the cross-block mixing that a double-precision eigensolver
/// introduces for quasi-degenerate parity doublets, giving the exact count
/// that finite-precision node merging cannot resolve.
std::size_t lmg_structural_k_dim(double S, double J, double tol_rel = 1e-10);

}  // namespace agpk
