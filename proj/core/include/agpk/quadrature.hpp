#pragma once

#include <functional>

namespace agpk::quad {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute, includes any tail bound
  bool converged = true;
  double t_max = 0.0;  // finite upper limit actually integrated to
};

struct Options {
  double tol = 1e-8;            // absolute tolerance for the full integral
  int max_depth = 15;           // adaptive bisection depth per panel
  double t_cap_factor = 1e3;    // hard cap: T <= t_cap_factor / mu
};

// Adaptive Gauss-Kronrod (G7,K15) integration over the finite interval
// [a, b]; `tol` is the absolute error target.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 15);

// Integration of f over [0, infinity) for integrands obeying the envelope
//   |f(t)| <= amplitude * (1/mu + t) * exp(-mu t).
// The domain is covered by panels [0, T] with T grown until the analytic
// envelope tail bound
//   integral_T^inf amplitude (1/mu + t) e^{-mu t} dt
//     = amplitude e^{-mu T} (2/mu^2 + T/mu)
// drops below tol/2, subject to the hard cap T <= t_cap_factor/mu.  If the
// cap is hit first, the result is returned with converged = false and the
// remaining tail bound folded into error_estimate.
Result integrate_to_infinity(const std::function<double(double)>& f, double mu,
                             double amplitude, const Options& opts = {});

}  // namespace agpk::quad
