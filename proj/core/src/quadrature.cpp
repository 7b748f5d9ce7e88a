#include "agpk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace agpk::quad {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  bool ok = true;
};

// One non-adaptive G7K15 application with its error estimate.
double apply_rule(const std::function<double(double)>& f, double a, double b,
                  double* err, double* l1) {
  return Rule::integrate(f, a, b, 0, 0.0, err, l1);
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol_abs, int depth, int max_depth, Accumulator& acc) {
  double err = 0.0, l1 = 0.0;
  const double v = apply_rule(f, a, b, &err, &l1);
  if (!std::isfinite(v)) {
    acc.ok = false;
    return;
  }
  // Do not demand more than double precision can deliver on this panel.
  const double floor_tol = 50.0 * kEps * std::max(l1, 1e-300);
  if (err <= std::max(tol_abs, floor_tol) || depth >= max_depth) {
    acc.value += v;
    acc.error += err;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol_abs, depth + 1, max_depth, acc);
  adapt(f, mid, b, 0.5 * tol_abs, depth + 1, max_depth, acc);
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  Accumulator acc;
  if (b > a) adapt(f, a, b, tol, 0, max_depth, acc);
  Result r;
  r.value = acc.value;
  r.error_estimate = acc.error;
  r.converged = acc.ok && acc.error <= tol;
  r.t_max = b;
  return r;
}

Result integrate_to_infinity(const std::function<double(double)>& f, double mu,
                             double amplitude, const Options& opts) {
  const double cap = opts.t_cap_factor / mu;
  const auto tail_bound = [&](double t) {
    return amplitude * std::exp(-mu * t) * (2.0 / (mu * mu) + t / mu);
  };
  double t_end = std::min(8.0 / mu, cap);
  while (tail_bound(t_end) > 0.5 * opts.tol && t_end < cap) {
    t_end = std::min(2.0 * t_end, cap);
  }
  const double tail = tail_bound(t_end);

  // Cover [0, t_end] with fixed panels sized to hold a handful of integrand
  // oscillations each; adaptive bisection refines inside every panel.
  const double width = std::max(1.0, 0.25 / mu);
  const int n_panels = std::max(1, static_cast<int>(std::ceil(t_end / width)));
  const double panel_tol = 0.5 * opts.tol / n_panels;

  Accumulator acc;
  for (int i = 0; i < n_panels && acc.ok; ++i) {
    const double a = t_end * i / n_panels;
    const double b = t_end * (i + 1) / n_panels;
    adapt(f, a, b, panel_tol, 0, opts.max_depth, acc);
  }

  Result r;
  r.value = acc.value;
  r.error_estimate = acc.error + tail;
  r.t_max = t_end;
  r.converged = acc.ok && r.error_estimate <= opts.tol;
  return r;
}

}  // namespace agpk::quad
