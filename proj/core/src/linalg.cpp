#include "agpk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agpk/errors.hpp"

namespace agpk::la {

namespace {

// Thomas factor-and-solve.  `cp` (modified superdiagonal) is reusable across
// solves with the same matrix; `x` is overwritten with the solution of the
// system whose right-hand side it holds on entry.
void thomas(const std::vector<double>& diag, const std::vector<double>& off,
            std::vector<double>& cp, std::vector<double>& x) {
  const std::size_t n = diag.size();
  double scale = 0.0;
  for (double d : diag) scale = std::max(scale, std::abs(d));
  for (double o : off) scale = std::max(scale, std::abs(o));
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  double piv = diag[0];
  if (std::abs(piv) <= tiny) {
    throw numerical_error(
        "singular tridiagonal system (zero pivot); the mu = 0 limit is "
        "ill-posed here -- use a positive regulator such as default_regulator");
  }
  cp.resize(n);
  cp[0] = n > 1 ? off[0] / piv : 0.0;
  x[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - off[i - 1] * cp[i - 1];
    if (std::abs(piv) <= tiny) {
      throw numerical_error(
          "singular tridiagonal system (zero pivot); the mu = 0 limit is "
          "ill-posed here -- use a positive regulator such as "
          "default_regulator");
    }
    cp[i] = i + 1 < n ? off[i] / piv : 0.0;
    x[i] = (x[i] - off[i - 1] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= cp[i] * x[i + 1];
  }
}

std::vector<double> residual(const std::vector<double>& diag,
                             const std::vector<double>& off,
                             const std::vector<double>& rhs,
                             const std::vector<double>& x) {
  const std::size_t n = diag.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double tx = diag[i] * x[i];
    if (i > 0) tx += off[i - 1] * x[i - 1];
    if (i + 1 < n) tx += off[i] * x[i + 1];
    r[i] = rhs[i] - tx;
  }
  return r;
}

}  // namespace

std::vector<double> tridiag_solve(const std::vector<double>& diag,
                                  const std::vector<double>& off,
                                  const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n || rhs.size() != n) {
    throw config_error("tridiag_solve: inconsistent system dimensions");
  }
  std::vector<double> cp;
  std::vector<double> x = rhs;
  thomas(diag, off, cp, x);
  // One step of iterative refinement.
  std::vector<double> r = residual(diag, off, rhs, x);
  thomas(diag, off, cp, r);
  for (std::size_t i = 0; i < n; ++i) x[i] += r[i];
  return x;
}

double tridiag_residual_inf(const std::vector<double>& diag,
                            const std::vector<double>& off,
                            const std::vector<double>& rhs,
                            const std::vector<double>& x) {
  double m = 0.0;
  for (double v : residual(diag, off, rhs, x)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace agpk::la
