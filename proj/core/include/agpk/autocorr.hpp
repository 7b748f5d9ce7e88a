#pragma once

#include <vector>

#include "agpk/quadrature.hpp"

namespace agpk {

/// Autocorrelation families with known analytic structure.  Every family
/// describes the autocorrelation C(t) of a *normalized* deformation operator:
/// C(0) = 1 and C is even in t.
enum class AutocorrFamily {
  gaussian,        ///< exp(-t^2/2)
  sech,            ///< sech(alpha t)^eta
  su2_cos,         ///< cos(alpha t)^L, L even (collective-spin ladder)
  bessel_const,    ///< J_1(2 alpha t)/(alpha t)  (constant Lanczos chain)
  bessel_j0sq,     ///< J_0(alpha t)^2
  xy_chain,        ///< J_0(4t)^2 + J_1(4t)^2
  ising_critical,  ///< transverse-field chain at the critical point, size L
  tabulated,       ///< sampled on a uniform-ish grid
};

struct AutocorrSpec {
  AutocorrFamily family = AutocorrFamily::gaussian;
  double alpha = 1.0;  ///< rate parameter (sech, su2_cos, bessel families)
  double eta = 1.0;    ///< sech exponent
  long length = 0;     ///< L (su2_cos, ising_critical)
  std::vector<double> t_grid;    ///< tabulated: ascending, t_grid[0] = 0
  std::vector<double> c_values;  ///< tabulated: C at the grid points

  static AutocorrSpec gaussian();
  static AutocorrSpec sech(double alpha, double eta);
  static AutocorrSpec su2_cos(long length, double alpha = 1.0);
  static AutocorrSpec bessel_const(double alpha);
  static AutocorrSpec bessel_j0sq(double alpha);
  static AutocorrSpec xy_chain();
  static AutocorrSpec ising_critical(long length);
  static AutocorrSpec tabulated(std::vector<double> t, std::vector<double> c);

  /// C(t); even by construction (evaluated at |t|).  Tabulated specs
  /// interpolate linearly and return the plateau beyond the grid.
  double evaluate(double t) const;

  /// Infinite-time average c_bar of C (analytic per family; trailing-window
  /// average for tabulated specs).  Subtracted before quadrature because the
  /// (1/mu - t) e^{-mu t} weight annihilates constants analytically but not
  /// numerically at small mu.
  double plateau() const;

  /// Bound on |C(t) - plateau()| used for quadrature tail certificates.
  double envelope_amplitude() const;
};

/// Two-point factor of the critical-chain family at site separation d:
///   J_{2d}(2t)^2 - J_{2d+1}(2t) J_{2d-1}(2t).
double ising_critical_pair(long separation, double t);

/// Integral-transform norm in the family convention:
///   integral_0^inf (1/mu - t) C(t) e^{-mu t} dt.
/// One cosine line w cos(omega t) contributes 2 w omega^2/(mu^2+omega^2)^2.
/// Throws numerical_error (reporting the partial value and the error
/// estimate) if the quadrature cannot certify the requested tolerance.
double agp_norm_from_autocorr(const AutocorrSpec& spec, double mu,
                              const quad::Options& opts = {});

/// Trace-convention operator norm: exactly half the family-convention
/// transform.  This is the quantity that matches the spectral oracle and the
/// Krylov-route sum of squared coefficients for C tabulated from a
/// normalized deformation.
double operator_norm_from_autocorr(const AutocorrSpec& spec, double mu,
                                   const quad::Options& opts = {});

bool closed_form_available(AutocorrFamily family);

/// Closed-form family-convention norm (gaussian, bessel_const, su2_cos,
/// bessel_j0sq, xy_chain).  Throws config_error for other families.
double closed_form_norm(const AutocorrSpec& spec, double mu);

struct MomentNormResult {
  double value = 0.0;
  double error_estimate = 0.0;  ///< magnitude of the last included term
  bool diverging = false;       ///< terms grew at the requested order
};

/// Large-mu asymptotic series in the trace convention:
///   sum_{n=1}^{order} n (-1)^{n+1} m_{2n} / mu^{2n+2},
/// where even_moments = (m_0, m_2, m_4, ...).
MomentNormResult agp_norm_from_moments(const std::vector<double>& even_moments,
                                       double mu, long order);

/// Rigorous ceiling M/mu^2 * ||dH||^2 on the physical squared norm at
/// truncation order M.
double agp_norm_bound(long m_count, double mu, double deformation_norm_sq);

struct ScalingRow {
  long size = 0;
  double mu = 0.0;
  double norm = 0.0;
  double norm_over_size = 0.0;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  double slope = 0.0;  ///< d log(norm)/dL fitted over the largest half
};

/// Norm-vs-size table at the size-dependent regulator mu = L 2^{-L}.  For
/// families with a length parameter the spec's length follows the row size.
/// Uses the closed form when available, otherwise quadrature (falling back
/// to the closed form if quadrature fails to converge at tiny mu).
ScalingStudy scaling_study(const AutocorrSpec& spec,
                           const std::vector<long>& sizes,
                           const quad::Options& opts = {});

}  // namespace agpk
