#include "agpk/agp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "agpk/errors.hpp"
#include "agpk/linalg.hpp"

namespace agpk {

namespace {

double coeff_or_zero(const std::vector<double>& b, long i) {
  return (i >= 1 && i <= static_cast<long>(b.size()))
             ? b[static_cast<std::size_t>(i - 1)]
             : 0.0;
}

}  // namespace

long max_truncation_order(std::size_t k_coeffs) {
  const long k = static_cast<long>(k_coeffs);
  if (k == 0) return -1;
  return (k % 2 == 1) ? (k - 1) / 2 : k / 2 - 1;
}

AgpSolution solve_alpha(const std::vector<double>& b, double mu,
                        long n_trunc) {
  const long m = max_truncation_order(b.size());
  if (n_trunc < -1)
    throw config_error("solve_alpha: truncation order must be >= -1");
  if (n_trunc > m) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "solve_alpha: truncation order %ld exceeds the available "
                  "odd coefficients (max %ld for %zu chain coefficients)",
                  n_trunc, m, b.size());
    throw config_error(msg);
  }

  AgpSolution sol;
  sol.mu = std::abs(mu);
  sol.n_trunc = n_trunc;
  if (n_trunc < 0) return sol;

  const std::size_t dim = static_cast<std::size_t>(n_trunc) + 1;
  const double mu_sq = mu * mu;
  std::vector<double> diag(dim), off(dim > 1 ? dim - 1 : 0),
      rhs(dim, 0.0);
  for (long k = 0; k <= n_trunc; ++k) {
    const double b_odd = coeff_or_zero(b, 2 * k + 1);
    const double b_even = coeff_or_zero(b, 2 * k + 2);
    diag[static_cast<std::size_t>(k)] = b_odd * b_odd + b_even * b_even +
                                        mu_sq;
    if (k < n_trunc)
      off[static_cast<std::size_t>(k)] =
          coeff_or_zero(b, 2 * k + 2) * coeff_or_zero(b, 2 * k + 3);
  }
  rhs[0] = -coeff_or_zero(b, 1);

  sol.a = la::tridiag_solve(diag, off, rhs);
  const double rhs_inf = std::abs(rhs[0]);
  const double res = la::tridiag_residual_inf(diag, off, rhs, sol.a);
  if (res > 1e-10 * std::max(rhs_inf, 1e-300))
    throw numerical_error(
        "solve_alpha: tridiagonal solve failed the residual check; the "
        "system is too ill-conditioned at this regulator");

  for (double ak : sol.a) sol.norm_sq += ak * ak;
  return sol;
}

AgpSolution solve_alpha(const std::vector<double>& b, double mu) {
  return solve_alpha(b, mu, max_truncation_order(b.size()));
}

double agp_norm_from_alpha(const AgpSolution& sol,
                           double deformation_norm_sq) {
  if (deformation_norm_sq < 0.0)
    throw config_error(
        "agp_norm_from_alpha: deformation_norm_sq must be non-negative");
  return deformation_norm_sq * sol.norm_sq;
}

OperatorSum assemble_agp(const KrylovData& basis, const AgpSolution& sol) {
  if (basis.basis.empty())
    throw config_error(
        "assemble_agp: Krylov basis not retained (set keep_basis)");
  const long needed = 2 * sol.n_trunc + 1;
  if (needed >= static_cast<long>(basis.basis.size()))
    throw config_error(
        "assemble_agp: solution refers to Krylov vectors beyond the stored "
        "basis");
  OperatorSum a_op = basis.basis[0];
  a_op.scale(0.0);
  for (long k = 0; k <= sol.n_trunc; ++k)
    a_op.add_scaled(basis.basis[static_cast<std::size_t>(2 * k + 1)],
                    std::complex<double>(0.0, sol.a[static_cast<std::size_t>(k)]));
  return a_op;
}

double gauge_residual(const OperatorSum& h, const OperatorSum& d_h_normalized,
                      const OperatorSum& a_op, double mu) {
  OperatorSum x = commutator(h, a_op);
  x.add_scaled(d_h_normalized, std::complex<double>(0.0, 1.0));
  OperatorSum g = commutator(h, x);
  g.add_scaled(a_op, mu * mu);
  return frobenius_norm(g);
}

double variational_action(const std::vector<double>& b,
                          const std::vector<double>& a, double mu) {
  const long n = static_cast<long>(a.size()) - 1;
  double s = 1.0;
  if (n < 0) return s;
  const double mu_sq = mu * mu;
  s += 2.0 * coeff_or_zero(b, 1) * a[0];
  for (long k = 0; k <= n; ++k) {
    const double b_odd = coeff_or_zero(b, 2 * k + 1);
    const double b_even = coeff_or_zero(b, 2 * k + 2);
    const double ak = a[static_cast<std::size_t>(k)];
    s += (b_odd * b_odd + b_even * b_even + mu_sq) * ak * ak;
    if (k < n)
      s += 2.0 * coeff_or_zero(b, 2 * k + 2) * coeff_or_zero(b, 2 * k + 3) *
           ak * a[static_cast<std::size_t>(k) + 1];
  }
  return s;
}

double alpha_recursion_residual(const std::vector<double>& b,
                                const AgpSolution& sol) {
  const long n = sol.n_trunc;
  auto a_of = [&](long k) -> double {
    return (k >= 0 && k <= n) ? sol.a[static_cast<std::size_t>(k)] : 0.0;
  };
  auto g_of = [&](long k) -> double {
    double g = (k == 0) ? 1.0 : 0.0;
    g += coeff_or_zero(b, 2 * k) * a_of(k - 1);
    g += coeff_or_zero(b, 2 * k + 1) * a_of(k);
    return g;
  };
  const double mu_sq = sol.mu * sol.mu;
  double worst = 0.0;
  for (long k = 0; k <= n + 1; ++k) {
    const double r = coeff_or_zero(b, 2 * k + 1) * g_of(k) +
                     coeff_or_zero(b, 2 * k + 2) * g_of(k + 1) +
                     mu_sq * a_of(k);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace agpk
