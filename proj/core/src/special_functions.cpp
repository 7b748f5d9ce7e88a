#include "agpk/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "agpk/errors.hpp"

namespace agpk::sf {

double bessel_j(int nu, double x) {
  double sign = 1.0;
  if (nu < 0) {
    nu = -nu;
    if (nu % 2 != 0) sign = -sign;
  }
  if (x < 0) {
    x = -x;
    if (nu % 2 != 0) sign = -sign;
  }
  return sign * std::cyl_bessel_j(static_cast<double>(nu), x);
}

double bessel_j0(double x) { return bessel_j(0, x); }

double bessel_j1(double x) { return bessel_j(1, x); }

double erfc(double x) { return std::erfc(x); }

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// AGM evaluation of {K(m), E(m)} for parameter 0 <= m < 1:
//   a_0 = 1, b_0 = sqrt(1-m), c_0 = sqrt(m);
//   a_{n+1} = (a_n+b_n)/2, b_{n+1} = sqrt(a_n b_n), c_{n+1} = (a_n-b_n)/2;
//   K = pi / (2 a_inf),   E = K (1 - sum_{n>=0} 2^{n-1} c_n^2).
std::pair<double, double> agm_ke(double m) {
  if (m == 0.0) return {kPi / 2, kPi / 2};
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double csum = 0.5 * m;  // 2^{-1} c_0^2
  double pow2 = 0.5;
  for (int it = 0; it < 64; ++it) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    csum += pow2 * c * c;
    if (c < std::numeric_limits<double>::epsilon() * a) break;
  }
  const double k = kPi / (2.0 * a);
  return {k, k * (1.0 - csum)};
}

void check_parameter(double m) {
  if (!(m < 1.0)) {
    throw numerical_error(
        "complete elliptic integral diverges for parameter m >= 1 (got m = " +
        std::to_string(m) + ")");
  }
}

}  // namespace

double ellint_K_param(double m) {
  check_parameter(m);
  if (m >= 0.0) return agm_ke(m).first;
  return agm_ke(m / (m - 1.0)).first / std::sqrt(1.0 - m);
}

double ellint_E_param(double m) {
  check_parameter(m);
  if (m >= 0.0) return agm_ke(m).second;
  return std::sqrt(1.0 - m) * agm_ke(m / (m - 1.0)).second;
}

}  // namespace agpk::sf
