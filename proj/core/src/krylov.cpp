#include "agpk/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agpk/errors.hpp"

namespace agpk {

namespace {

// K+1 can never exceed D^2 - D + 1 (the operator space modulo the identity
// plus the starting operator); cap the iteration there when the dimension is
// small enough for the bound to matter.
long krylov_dimension_cap(const OperatorSum& o) {
  const double d = o.hilbert_dim();
  const double bound = d * d - d;  // max K
  if (bound > 1e8) return std::numeric_limits<long>::max();
  return std::max(1L, static_cast<long>(bound));
}

}  // namespace

KrylovData lanczos(const OperatorSum& h, const OperatorSum& o0,
                   const LanczosOptions& opts) {
  const double o0_norm = std::real(inner_product(o0, o0));
  if (std::abs(o0_norm - 1.0) > 1e-10) {
    throw config_error(
        "lanczos: starting operator is not normalized ((o0|o0) must equal 1)");
  }
  if (!is_hermitian(h, 1e-10)) {
    throw config_error("lanczos: Hamiltonian must be Hermitian");
  }

  KrylovData out;
  const bool store = opts.keep_basis;
  const bool reorth = store && opts.reorth;
  if (store) out.basis.push_back(o0);

  const long structural_cap = krylov_dimension_cap(o0);
  const long hard_cap = std::min<long>(opts.max_steps, structural_cap);
  OperatorSum prev = o0;
  OperatorSum prevprev;
  double b_max = 0.0;
  out.terminated = LanczosTermination::max_steps;
  for (long n = 1; n <= hard_cap; ++n) {
    OperatorSum a = liouvillian_apply(h, prev);
    if (n >= 2) a.add_scaled(prevprev, -out.b.back());
    if (reorth) {
      for (int pass = 0; pass < 2; ++pass) {
        for (const OperatorSum& q : out.basis) {
          a.add_scaled(q, -inner_product(q, a));
        }
      }
    }
    const double bn = std::sqrt(
        std::max(0.0, std::real(inner_product(a, a))));
    if (bn <= opts.tol * std::max(1.0, b_max)) {
      out.terminated = LanczosTermination::b_below_tolerance;
      break;
    }
    b_max = std::max(b_max, bn);
    out.b.push_back(bn);
    a.scale(1.0 / bn);
    prevprev = std::move(prev);
    prev = a;
    if (store) out.basis.push_back(std::move(a));
  }
  // Exhausting the structural bound D^2 - D means the next iterate is
  // linearly dependent on the basis, i.e. the space is closed -- that is a
  // closure, not a step-cap stop.
  if (out.terminated == LanczosTermination::max_steps &&
      static_cast<long>(out.b.size()) >= structural_cap) {
    out.terminated = LanczosTermination::b_below_tolerance;
  }
  out.k_dim = static_cast<int>(out.b.size()) + 1;
  return out;
}

PsiTable propagate_psi(const std::vector<double>& b,
                       const std::vector<double>& t_grid) {
  if (b.empty()) {
    throw config_error("propagate_psi: empty coefficient sequence");
  }
  if (t_grid.empty()) {
    throw config_error("propagate_psi: empty time grid");
  }
  if (t_grid.front() < 0.0) {
    throw config_error("propagate_psi: time grid must start at t >= 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] < t_grid[i - 1]) {
      throw config_error("propagate_psi: time grid must be non-decreasing");
    }
  }

  const std::size_t n_states = b.size() + 1;
  const double b_max = *std::max_element(b.begin(), b.end());

  // Step control: the classic explicit 4th-order scheme conserves the norm
  // only to O((b_max dt)^5) per step, so pick dt from both the spec'd bound
  // 0.01/b_max and an accumulated drift budget of ~1e-9 over the whole run.
  double dt = 1.0;
  const double t_max = std::max(t_grid.back(), 1e-12);
  if (b_max > 0.0) {
    const double dt_spec = 0.01 / b_max;
    const double dt_drift = std::pow(
        1e-9 / (std::pow(b_max, 5) * t_max), 0.25);
    dt = std::min(dt_spec, dt_drift);
  }

  Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states));
  psi[0] = 1.0;

  auto deriv = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd d(y.size());
    for (std::size_t n = 0; n < n_states; ++n) {
      double v = 0.0;
      if (n + 1 < n_states) v -= b[n] * y[static_cast<Eigen::Index>(n + 1)];
      if (n >= 1) v += b[n - 1] * y[static_cast<Eigen::Index>(n - 1)];
      d[static_cast<Eigen::Index>(n)] = v;
    }
    return d;
  };

  auto rk4_to = [&](double t_from, double t_to) {
    const double span = t_to - t_from;
    if (span <= 0.0) return;
    const long n_sub = std::max(1L, static_cast<long>(std::ceil(span / dt)));
    const double h = span / static_cast<double>(n_sub);
    for (long s = 0; s < n_sub; ++s) {
      const Eigen::VectorXd k1 = deriv(psi);
      const Eigen::VectorXd k2 = deriv(psi + 0.5 * h * k1);
      const Eigen::VectorXd k3 = deriv(psi + 0.5 * h * k2);
      const Eigen::VectorXd k4 = deriv(psi + h * k3);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  };

  PsiTable table;
  table.t = t_grid;
  table.psi.resize(static_cast<Eigen::Index>(t_grid.size()),
                   static_cast<Eigen::Index>(n_states));
  double t_now = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    rk4_to(t_now, t_grid[i]);
    t_now = t_grid[i];
    table.psi.row(static_cast<Eigen::Index>(i)) = psi.transpose();
    table.max_norm_drift =
        std::max(table.max_norm_drift, std::abs(psi.squaredNorm() - 1.0));
  }
  return table;
}

std::vector<double> moments_from_lanczos(const std::vector<double>& b,
                                         int order) {
  if (order < 0) {
    throw config_error("moments_from_lanczos: order must be >= 0");
  }
  if (order > 2 * static_cast<int>(b.size())) {
    throw config_error(
        "moments_from_lanczos: order exceeds the available coefficients "
        "(need order <= 2 * len(b))");
  }
  // Walk the Jacobi matrix: w <- T w with T tridiagonal, zero diagonal,
  // off-diagonal b.  (T^s)_{00} read off after each even step is exactly the
  // Dyck-path sum for m_s; a returning walk of length 2n never leaves the
  // first n+1 states, so the truncation at len(b)+1 states is exact.
  std::vector<double> moments;
  moments.reserve(static_cast<std::size_t>(order / 2) + 1);
  moments.push_back(1.0);
  const std::size_t n_states = b.size() + 1;
  std::vector<double> w(n_states, 0.0), next(n_states, 0.0);
  w[0] = 1.0;
  for (int s = 1; s <= order; ++s) {
    for (std::size_t i = 0; i < n_states; ++i) {
      double v = 0.0;
      if (i >= 1) v += b[i - 1] * w[i - 1];
      if (i + 1 < n_states) v += b[i] * w[i + 1];
      next[i] = v;
    }
    std::swap(w, next);
    if (s % 2 == 0) moments.push_back(w[0]);
  }
  return moments;
}

std::vector<double> lanczos_from_moments(const std::vector<double>& m) {
  if (m.empty() || std::abs(m[0] - 1.0) > 1e-12) {
    throw config_error("lanczos_from_moments: m_0 must equal 1");
  }
  const std::size_t n = m.size() - 1;  // number of coefficients recoverable
  if (n == 0) return {};
  // Recurrence for sigma_{k,l} = <p_k, x^l> over monic orthogonal
  // polynomials p_k of the symmetric measure with raw moments mu_l
  // (mu_{2j} = m_j, odd moments zero):
  //   sigma_{k,l} = sigma_{k-1,l+1} - beta_{k-1} sigma_{k-2,l},
  //   beta_k = sigma_{k,k} / sigma_{k-1,k-1},  b_k = sqrt(beta_k).
  // Extended precision buys headroom against the classic ill-conditioning of
  // moment-based recovery.
  const std::size_t width = 2 * n + 1;
  std::vector<long double> prev(width, 0.0L), curr(width, 0.0L),
      next(width, 0.0L);
  for (std::size_t l = 0; l < width; ++l) {
    curr[l] = (l % 2 == 0) ? static_cast<long double>(m[l / 2]) : 0.0L;
  }
  std::vector<double> b;
  b.reserve(n);
  long double beta_prev = 0.0L;  // beta_{k-1}; zero for k = 1
  long double diag_prev = curr[0];  // sigma_{k-1,k-1}
  for (std::size_t k = 1; k <= n; ++k) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t l = k; l + k <= 2 * n; ++l) {
      next[l] = curr[l + 1] - beta_prev * prev[l];
    }
    const long double diag = next[k];
    const long double beta = diag / diag_prev;
    if (!(beta > 0.0L) || !std::isfinite(static_cast<double>(beta))) {
      throw numerical_error(
          "lanczos_from_moments: moment sequence is not realizable "
          "(positivity violated at step " + std::to_string(k) + ")");
    }
    b.push_back(std::sqrt(static_cast<double>(beta)));
    prev.swap(curr);
    curr.swap(next);
    beta_prev = beta;
    diag_prev = diag;
  }
  return b;
}

}  // namespace agpk
