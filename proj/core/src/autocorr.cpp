#include "agpk/autocorr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "agpk/errors.hpp"
#include "agpk/special_functions.hpp"

namespace agpk {

namespace {

constexpr double kPi = 3.14159265358979323846;

double int_pow(double base, long n) {
  double acc = 1.0, b = base;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) acc *= b;
    b *= b;
  }
  return acc;
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453094;
}

/// Binomial weight C(L,k) 2^{-L}, factored to stay in range for large L.
double binomial_weight(long l, long k) {
  double acc = 1.0;
  for (long i = 1; i <= k; ++i)
    acc *= static_cast<double>(l - k + i) / (2.0 * static_cast<double>(i));
  return std::ldexp(acc, static_cast<int>(-(l - k)));
}

/// Family-convention contribution of one cosine line w cos(omega t).
double line_norm(double weight, double omega, double mu) {
  const double denom = mu * mu + omega * omega;
  return 2.0 * weight * omega * omega / (denom * denom);
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    char msg[120];
    std::snprintf(msg, sizeof(msg), "%s must be positive", what);
    throw config_error(msg);
  }
}

}  // namespace

AutocorrSpec AutocorrSpec::gaussian() {
  AutocorrSpec s;
  s.family = AutocorrFamily::gaussian;
  return s;
}

AutocorrSpec AutocorrSpec::sech(double alpha, double eta) {
  require_positive(alpha, "sech family: alpha");
  require_positive(eta, "sech family: eta");
  AutocorrSpec s;
  s.family = AutocorrFamily::sech;
  s.alpha = alpha;
  s.eta = eta;
  return s;
}

AutocorrSpec AutocorrSpec::su2_cos(long length, double alpha) {
  require_positive(alpha, "su2_cos family: alpha");
  if (length <= 0 || length % 2 != 0)
    throw config_error(
        "su2_cos family: length must be a positive even integer (twice the "
        "collective spin)");
  AutocorrSpec s;
  s.family = AutocorrFamily::su2_cos;
  s.alpha = alpha;
  s.length = length;
  return s;
}

AutocorrSpec AutocorrSpec::bessel_const(double alpha) {
  require_positive(alpha, "bessel_const family: alpha");
  AutocorrSpec s;
  s.family = AutocorrFamily::bessel_const;
  s.alpha = alpha;
  return s;
}

AutocorrSpec AutocorrSpec::bessel_j0sq(double alpha) {
  require_positive(alpha, "bessel_j0sq family: alpha");
  AutocorrSpec s;
  s.family = AutocorrFamily::bessel_j0sq;
  s.alpha = alpha;
  return s;
}

AutocorrSpec AutocorrSpec::xy_chain() {
  AutocorrSpec s;
  s.family = AutocorrFamily::xy_chain;
  return s;
}

AutocorrSpec AutocorrSpec::ising_critical(long length) {
  if (length <= 0)
    throw config_error("ising_critical family: length must be positive");
  AutocorrSpec s;
  s.family = AutocorrFamily::ising_critical;
  s.length = length;
  return s;
}

AutocorrSpec AutocorrSpec::tabulated(std::vector<double> t,
                                     std::vector<double> c) {
  if (t.size() != c.size() || t.size() < 2)
    throw config_error(
        "tabulated family: need at least two samples with matching grids");
  if (t.front() != 0.0)
    throw config_error("tabulated family: grid must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw config_error("tabulated family: grid must be strictly ascending");
  if (std::abs(c.front() - 1.0) > 1e-8)
    throw config_error("tabulated family: C(0) must equal 1");
  AutocorrSpec s;
  s.family = AutocorrFamily::tabulated;
  s.t_grid = std::move(t);
  s.c_values = std::move(c);
  return s;
}

double ising_critical_pair(long separation, double t) {
  const int nu = static_cast<int>(2 * separation);
  const double x = 2.0 * t;
  const double j_even = sf::bessel_j(nu, x);
  return j_even * j_even - sf::bessel_j(nu + 1, x) * sf::bessel_j(nu - 1, x);
}

double AutocorrSpec::evaluate(double t) const {
  t = std::abs(t);
  switch (family) {
    case AutocorrFamily::gaussian:
      return std::exp(-0.5 * t * t);
    case AutocorrFamily::sech:
      return std::exp(-eta * log_cosh(alpha * t));
    case AutocorrFamily::su2_cos:
      return int_pow(std::cos(alpha * t), length);
    case AutocorrFamily::bessel_const: {
      const double x = alpha * t;
      if (x < 1e-6) return 1.0 - 0.5 * x * x;
      return sf::bessel_j(1, 2.0 * x) / x;
    }
    case AutocorrFamily::bessel_j0sq: {
      const double j0 = sf::bessel_j0(alpha * t);
      return j0 * j0;
    }
    case AutocorrFamily::xy_chain: {
      const double j0 = sf::bessel_j0(4.0 * t);
      const double j1 = sf::bessel_j1(4.0 * t);
      return j0 * j0 + j1 * j1;
    }
    case AutocorrFamily::ising_critical: {
      double acc = static_cast<double>(length) * ising_critical_pair(0, t);
      for (long d = 1; d < length; ++d)
        acc += 2.0 * static_cast<double>(length - d) *
               ising_critical_pair(d, t);
      return acc / static_cast<double>(length);
    }
    case AutocorrFamily::tabulated: {
      if (t >= t_grid.back()) return plateau();
      const auto it =
          std::upper_bound(t_grid.begin(), t_grid.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - t_grid.begin());
      if (hi == 0) return c_values.front();
      const double t0 = t_grid[hi - 1], t1 = t_grid[hi];
      const double w = (t - t0) / (t1 - t0);
      return (1.0 - w) * c_values[hi - 1] + w * c_values[hi];
    }
  }
  throw config_error("evaluate: unknown autocorrelation family");
}

double AutocorrSpec::plateau() const {
  switch (family) {
    case AutocorrFamily::su2_cos:
      // time average of cos^L: the omega = 0 line of the binomial expansion
      return binomial_weight(length, length / 2);
    case AutocorrFamily::tabulated: {
      const double t_lo = 0.9 * t_grid.back();
      double acc = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] >= t_lo) {
          acc += c_values[i];
          ++n;
        }
      }
      return (n > 0) ? acc / static_cast<double>(n) : 0.0;
    }
    default:
      return 0.0;
  }
}

double AutocorrSpec::envelope_amplitude() const {
  switch (family) {
    case AutocorrFamily::su2_cos:
      return 1.0 + plateau();
    case AutocorrFamily::ising_critical:
      // |C_{l,m}| <= 1 per pair; L^2 ordered pairs over the 1/L normalization
      return static_cast<double>(length);
    case AutocorrFamily::tabulated: {
      const double c_bar = plateau();
      double amp = 0.0;
      for (double c : c_values) amp = std::max(amp, std::abs(c - c_bar));
      return amp;
    }
    default:
      return 1.0;
  }
}

namespace {

/// Antiderivative of (1/mu - t)(a + b t) e^{-mu t}.
double linear_segment_antiderivative(double a, double b, double mu, double t) {
  const double inv = 1.0 / mu;
  const double e = std::exp(-mu * t);
  if (e == 0.0) return 0.0;
  return e * (-a * inv * inv - (b * inv - a) * (t * inv + inv * inv) +
              b * (t * t * inv + 2.0 * t * inv * inv +
                   2.0 * inv * inv * inv));
}

/// Exact integral transform of a piecewise-linear plateau-subtracted
/// autocorrelation.  Summing closed segment integrals avoids the
/// quadrature-resolution problem posed by a kink in every grid cell.
double tabulated_transform(const AutocorrSpec& spec, double mu) {
  const double c_bar = spec.plateau();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < spec.t_grid.size(); ++i) {
    const double t0 = spec.t_grid[i], t1 = spec.t_grid[i + 1];
    const double c0 = spec.c_values[i] - c_bar;
    const double c1 = spec.c_values[i + 1] - c_bar;
    const double slope = (c1 - c0) / (t1 - t0);
    const double offset = c0 - slope * t0;
    acc += linear_segment_antiderivative(offset, slope, mu, t1) -
           linear_segment_antiderivative(offset, slope, mu, t0);
  }
  return acc;  // beyond the grid the subtracted signal is defined as zero
}

}  // namespace

double agp_norm_from_autocorr(const AutocorrSpec& spec, double mu,
                              const quad::Options& opts) {
  require_positive(mu, "agp_norm_from_autocorr: mu");
  if (spec.family == AutocorrFamily::tabulated)
    return tabulated_transform(spec, mu);
  const double c_bar = spec.plateau();
  const double amp = spec.envelope_amplitude();
  auto integrand = [&](double t) {
    return (1.0 / mu - t) * (spec.evaluate(t) - c_bar) * std::exp(-mu * t);
  };
  const quad::Result r = quad::integrate_to_infinity(integrand, mu, amp, opts);
  if (!r.converged) {
    char msg[240];
    std::snprintf(msg, sizeof(msg),
                  "agp_norm_from_autocorr: quadrature did not converge "
                  "(partial value %.17g, error estimate %.17g, t_max %.17g)",
                  r.value, r.error_estimate, r.t_max);
    throw numerical_error(msg);
  }
  return r.value;
}

double operator_norm_from_autocorr(const AutocorrSpec& spec, double mu,
                                   const quad::Options& opts) {
  return 0.5 * agp_norm_from_autocorr(spec, mu, opts);
}

bool closed_form_available(AutocorrFamily family) {
  switch (family) {
    case AutocorrFamily::gaussian:
    case AutocorrFamily::bessel_const:
    case AutocorrFamily::su2_cos:
    case AutocorrFamily::bessel_j0sq:
    case AutocorrFamily::xy_chain:
      return true;
    default:
      return false;
  }
}

double closed_form_norm(const AutocorrSpec& spec, double mu) {
  require_positive(mu, "closed_form_norm: mu");
  switch (spec.family) {
    case AutocorrFamily::gaussian:
      return std::sqrt(0.5 * kPi) * std::exp(0.5 * mu * mu) *
                 (1.0 + mu * mu) * sf::erfc(mu / std::sqrt(2.0)) / mu -
             1.0;
    case AutocorrFamily::bessel_const: {
      const double a = spec.alpha;
      return (std::sqrt(4.0 * a * a / (mu * mu) + 1.0) - 1.0) / (a * a) -
             2.0 / (mu * std::sqrt(4.0 * a * a + mu * mu));
    }
    case AutocorrFamily::su2_cos: {
      double acc = 0.0;
      for (long k = 0; k <= spec.length; ++k) {
        const double omega =
            static_cast<double>(spec.length - 2 * k) * spec.alpha;
        if (omega == 0.0) continue;
        acc += line_norm(binomial_weight(spec.length, k), omega, mu);
      }
      return acc;
    }
    case AutocorrFamily::bessel_j0sq: {
      const double a = spec.alpha;
      const double m = -4.0 * a * a / (mu * mu);
      return 2.0 / (kPi * mu * mu) * sf::ellint_K_param(m) -
             2.0 / (kPi * (mu * mu + 4.0 * a * a)) * sf::ellint_E_param(m);
    }
    case AutocorrFamily::xy_chain: {
      const double m = -64.0 / (mu * mu);
      return ((mu * mu + 32.0) * sf::ellint_K_param(m) -
              mu * mu * sf::ellint_E_param(m)) /
             (8.0 * kPi * mu * mu);
    }
    default:
      throw config_error(
          "closed_form_norm: no closed form for this family (use "
          "agp_norm_from_autocorr)");
  }
}

MomentNormResult agp_norm_from_moments(const std::vector<double>& even_moments,
                                       double mu, long order) {
  require_positive(mu, "agp_norm_from_moments: mu");
  if (order < 0)
    throw config_error("agp_norm_from_moments: order must be >= 0");
  if (order + 1 > static_cast<long>(even_moments.size()))
    throw config_error(
        "agp_norm_from_moments: order exceeds the available moments");
  MomentNormResult out;
  const double inv_mu_sq = 1.0 / (mu * mu);
  double weight = inv_mu_sq * inv_mu_sq;  // 1/mu^{2n+2} at n = 1
  double prev_mag = 0.0;
  for (long n = 1; n <= order; ++n) {
    const double term = static_cast<double>(n) *
                        ((n % 2 == 1) ? 1.0 : -1.0) *
                        even_moments[static_cast<std::size_t>(n)] * weight;
    out.value += term;
    const double mag = std::abs(term);
    if (n > 1 && mag > prev_mag) out.diverging = true;
    out.error_estimate = mag;
    prev_mag = mag;
    weight *= inv_mu_sq;
  }
  return out;
}

double agp_norm_bound(long m_count, double mu, double deformation_norm_sq) {
  require_positive(mu, "agp_norm_bound: mu");
  if (m_count < 0)
    throw config_error("agp_norm_bound: truncation count must be >= 0");
  return static_cast<double>(m_count) / (mu * mu) * deformation_norm_sq;
}

ScalingStudy scaling_study(const AutocorrSpec& spec,
                           const std::vector<long>& sizes,
                           const quad::Options& opts) {
  if (sizes.empty())
    throw config_error("scaling_study: empty size range");
  ScalingStudy out;
  for (long l : sizes) {
    if (l <= 0) throw config_error("scaling_study: sizes must be positive");
    AutocorrSpec row_spec = spec;
    if (spec.family == AutocorrFamily::su2_cos ||
        spec.family == AutocorrFamily::ising_critical)
      row_spec.length = l;
    if (row_spec.family == AutocorrFamily::su2_cos && l % 2 != 0)
      throw config_error("scaling_study: su2_cos sizes must be even");
    const double mu = static_cast<double>(l) *
                      std::ldexp(1.0, static_cast<int>(-std::min(l, 1000L)));
    double norm;
    if (closed_form_available(row_spec.family))
      norm = closed_form_norm(row_spec, mu);
    else
      norm = agp_norm_from_autocorr(row_spec, mu, opts);
    out.rows.push_back({l, mu, norm, norm / static_cast<double>(l)});
  }

  // Least-squares slope of log(norm) vs L over the largest half of the range.
  const std::size_t n = out.rows.size();
  const std::size_t half = (n + 1) / 2;
  const std::size_t start = n - half;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = start; i < n; ++i) {
    if (!(out.rows[i].norm > 0.0)) continue;
    const double x = static_cast<double>(out.rows[i].size);
    const double y = std::log(out.rows[i].norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    if (denom != 0.0)
      out.slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
  }
  return out;
}

}  // namespace agpk
