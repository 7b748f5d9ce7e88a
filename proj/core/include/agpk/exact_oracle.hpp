#pragma once

#include <Eigen/Dense>
#include <vector>

#include "agpk/operator_sum.hpp"

namespace agpk {

/// Eigendecomposition of a Hermitian operator.
struct Spectrum {
  Eigen::VectorXd eigenvalues;    ///< ascending
  Eigen::MatrixXcd eigenvectors;  ///< columns, unitary
  Eigen::Index dim = 0;
};

/// Dense Hermitian eigendecomposition.  Sparse inputs are converted first.
/// Throws resource_error beyond `dim_cap` (default 4096) and config_error for
/// non-Hermitian input.
Spectrum eigendecompose(const OperatorSum& h, Eigen::Index dim_cap = 4096);

/// An operator rotated into the eigenbasis of a Hamiltonian, for repeated
/// frequency-space evaluations.
struct EigenbasisOperator {
  Spectrum spectrum;
  Eigen::MatrixXcd elements;  ///< V^dag O V
};

EigenbasisOperator to_eigenbasis(const OperatorSum& h, const OperatorSum& o,
                                 Eigen::Index dim_cap = 4096);

/// Exact regularized norm
///   ||A||^2 = (1/D) sum_{m != n} w(omega_mn) |<m|dH|n>|^2,
///   w(omega) = omega^2 / (mu^2 + omega^2)^2,  omega_mn = E_m - E_n.
/// Degenerate pairs carry weight 0 for mu > 0.  For mu = 0 a degenerate pair
/// with coupling |<m|dH|n>| >= 1e-12 makes the norm divergent: numerical_error.
/// `normalized` divides by (dH|dH) = (1/D) sum |<m|dH|n>|^2.
double agp_norm_exact(const OperatorSum& h, const OperatorSum& d_h, double mu,
                      bool normalized);
double agp_norm_exact(const EigenbasisOperator& d_h, double mu,
                      bool normalized);

/// Exact regularized gauge-potential matrix, dense, in the same basis as the
/// inputs: <m|A|n> = -i omega_mn/(mu^2+omega_mn^2) <m|dH|n>, zero diagonal.
/// Degeneracy handling as in agp_norm_exact.
OperatorSum agp_matrix_exact(const OperatorSum& h, const OperatorSum& d_h,
                             double mu);

/// Infinite-temperature autocorrelation
///   C(t) = (1/D) sum_{m,n} |<m|O|n>|^2 cos(omega_mn t)
/// for a normalized operator ((O|O) = 1 within 1e-8); C(0) = 1, C even.
double autocorrelation(const OperatorSum& h, const OperatorSum& o_normalized,
                       double t);
double autocorrelation(const EigenbasisOperator& o, double t);

struct ResponseSamples {
  std::vector<double> omega_centers;
  double bin_width = 0.0;
  std::vector<double> values;  ///< binned |<m|dH|n>|^2 / (D * bin_width)
};

/// Folded histogram of off-diagonal spectral weight over |omega_mn|.
/// Non-positive bin_width / omega_max select the defaults: 200 uniform bins
/// over [0, max |omega_mn|].
ResponseSamples response_function(const OperatorSum& h, const OperatorSum& d_h,
                                  double bin_width = 0.0,
                                  double omega_max = 0.0);

}  // namespace agpk
