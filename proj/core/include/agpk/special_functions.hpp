#pragma once

namespace agpk::sf {

// Bessel function of the first kind J_nu for integer order.  Thin wrapper over
// the C++17 <cmath> implementation adding the reflection rules it lacks
// (std::cyl_bessel_j requires nu >= 0 and x >= 0):
//   J_{-n}(x) = (-1)^n J_n(x),   J_n(-x) = (-1)^n J_n(x).
double bessel_j(int nu, double x);
double bessel_j0(double x);
double bessel_j1(double x);

// Complementary error function (wrapper over std::erfc, kept for a single
// seam that the reference-value tests pin down).
double erfc(double x);

// Complete elliptic integrals in the *parameter* convention,
//   K(m) = integral_0^{pi/2} (1 - m sin^2 th)^{-1/2} dth,   E(m) likewise,
// computed by the arithmetic-geometric mean.  Valid for every m < 1; negative
// parameters are mapped into [0, 1) by the imaginary-modulus transformations
//   K(m) = K(m/(m-1)) / sqrt(1-m),   E(m) = sqrt(1-m) * E(m/(m-1)).
// Throws numerical_error for m >= 1 (the integrals diverge at m = 1).
double ellint_K_param(double m);
double ellint_E_param(double m);

}  // namespace agpk::sf
