#include "agpk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <vector>

#include "agpk/errors.hpp"
#include "agpk/linalg.hpp"
#include "agpk/model.hpp"

namespace agpk {

namespace {

constexpr double kMergeTolRel = 1e-12;
constexpr double kWeightDropRel = 1e-24;

/// Solves the truncated gauge-potential system for the coefficient prefix b
/// (at regulator mu, full truncation) and returns the coefficients a.  Kept
/// private to this translation unit: the public solver lives elsewhere and
/// depends on operator-space Krylov data, while the functional monitors here
/// only ever need the tridiagonal solve itself.
std::vector<double> prefix_alpha(const std::vector<double>& b, double mu) {
  const long k = static_cast<long>(b.size());
  const long m = (k == 0) ? -1 : (k % 2 == 1 ? (k - 1) / 2 : k / 2 - 1);
  if (m < 0) return {};
  auto bb = [&](long i) -> double {
    return (i >= 1 && i <= k) ? b[static_cast<std::size_t>(i - 1)] : 0.0;
  };
  const std::size_t dim = static_cast<std::size_t>(m) + 1;
  std::vector<double> diag(dim);
  std::vector<double> off(dim > 1 ? dim - 1 : 0);
  std::vector<double> rhs(dim, 0.0);
  for (long i = 0; i <= m; ++i) {
    const double b1 = bb(2 * i + 1);
    const double b2 = bb(2 * i + 2);
    diag[static_cast<std::size_t>(i)] = b1 * b1 + b2 * b2 + mu * mu;
    if (i < m)
      off[static_cast<std::size_t>(i)] = bb(2 * i + 2) * bb(2 * i + 3);
  }
  rhs[0] = -bb(1);
  return la::tridiag_solve(diag, off, rhs);
}

}  // namespace

FrequencyNodes frequency_nodes(const OperatorSum& h, const OperatorSum& o0,
                               bool keep_pair_map, Eigen::Index dim_cap) {
  const double o0_norm = inner_product(o0, o0).real();
  if (std::abs(o0_norm - 1.0) > 1e-8)
    throw config_error(
        "frequency_nodes: the seed operator must be normalized, (o0|o0) = 1");

  Spectrum spec = eigendecompose(h, dim_cap);
  const OperatorSum o0_dense =
      (o0.backend() == Backend::dense) ? o0 : to_dense(o0);
  if (o0_dense.matrix().rows() != spec.dim)
    throw config_error(
        "frequency_nodes: operator/Hamiltonian dimension mismatch");
  const Eigen::MatrixXcd m0 = spec.eigenvectors.adjoint() *
                              o0_dense.matrix() * spec.eigenvectors;
  const Eigen::Index d = spec.dim;
  const std::size_t n_pairs = static_cast<std::size_t>(d) *
                              static_cast<std::size_t>(d);

  std::vector<double> w_all(n_pairs), p_all(n_pairs);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index n = 0; n < d; ++n) {
      const std::size_t idx = static_cast<std::size_t>(m * d + n);
      w_all[idx] = spec.eigenvalues(m) - spec.eigenvalues(n);
      p_all[idx] = std::norm(m0(m, n)) / static_cast<double>(d);
    }
  }

  std::vector<std::size_t> order(n_pairs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return w_all[a] < w_all[b];
                   });

  double w_span = 0.0;
  for (double w : w_all) w_span = std::max(w_span, std::abs(w));
  const double tol = kMergeTolRel * std::max(w_span, 1.0);

  FrequencyNodes out;
  out.dim = d;
  out.eigenvalues = spec.eigenvalues;
  out.eigenvectors = spec.eigenvectors;
  out.m0 = m0;
  std::vector<std::int32_t> node_of_sorted;
  if (keep_pair_map) node_of_sorted.assign(n_pairs, -1);

  std::size_t i = 0;
  while (i < n_pairs) {
    std::size_t j = i;
    double acc_w = 0.0, acc_om = 0.0;
    const double anchor = w_all[order[i]];
    while (j < n_pairs && w_all[order[j]] - anchor <= tol) {
      acc_w += p_all[order[j]];
      acc_om += w_all[order[j]] * p_all[order[j]];
      ++j;
    }
    if (acc_w > 0.0) {
      const std::int32_t node = static_cast<std::int32_t>(out.omega.size());
      out.omega.push_back(acc_om / acc_w);
      out.weight.push_back(acc_w);
      if (keep_pair_map)
        for (std::size_t p = i; p < j; ++p) node_of_sorted[order[p]] = node;
    }
    i = j;
  }

  out.total_weight =
      std::accumulate(out.weight.begin(), out.weight.end(), 0.0);
  const double drop = kWeightDropRel * out.total_weight;
  std::vector<std::int32_t> remap(out.omega.size(), -1);
  std::size_t kept = 0;
  for (std::size_t nidx = 0; nidx < out.omega.size(); ++nidx) {
    if (out.weight[nidx] > drop) {
      remap[nidx] = static_cast<std::int32_t>(kept);
      out.omega[kept] = out.omega[nidx];
      out.weight[kept] = out.weight[nidx];
      ++kept;
    }
  }
  out.omega.resize(kept);
  out.weight.resize(kept);
  if (keep_pair_map) {
    out.node_of_pair.assign(n_pairs, -1);
    for (std::size_t p = 0; p < n_pairs; ++p) {
      const std::int32_t node = node_of_sorted[p];
      out.node_of_pair[p] = (node >= 0) ? remap[static_cast<std::size_t>(node)]
                                        : std::int32_t{-1};
    }
  }
  return out;
}

SpectralLanczosResult spectral_lanczos(const FrequencyNodes& nodes,
                                       const SpectralLanczosOptions& opts) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.omega.size());
  if (n == 0)
    throw config_error("spectral_lanczos: empty frequency-node set");
  if (opts.tol <= 0.0)
    throw config_error("spectral_lanczos: tolerance must be positive");

  const long max_steps =
      (opts.max_steps < 0) ? static_cast<long>(n) + 5 : opts.max_steps;
  const bool want_norm_stop = opts.mu >= 0.0 && opts.norm_rel_change > 0.0;
  const bool want_residual_stop = opts.mu >= 0.0 && opts.residual_target > 0.0;

  const Eigen::Map<const Eigen::VectorXd> om(nodes.omega.data(), n);
  Eigen::VectorXd cur(n);
  for (Eigen::Index v = 0; v < n; ++v) cur(v) = std::sqrt(nodes.weight[v]);
  cur /= cur.norm();

  Eigen::Index cols = std::min<Eigen::Index>(n, 1024);
  Eigen::MatrixXd basis(n, cols);
  basis.col(0) = cur;
  Eigen::Index k = 1;  // stored vectors

  SpectralLanczosResult out;
  out.krylov.terminated = LanczosTermination::max_steps;
  std::vector<double>& b = out.krylov.b;
  Eigen::VectorXd prev(n), w(n);
  double b_max = 1.0;

  double last_norm = -1.0;
  int stable = 0;
  long since_check = 0;

  for (long step = 0; step < max_steps; ++step) {
    if (k == n) {
      // The node space is exhausted: the orbit closed on the full space.
      out.krylov.terminated = LanczosTermination::b_below_tolerance;
      break;
    }
    w = om.cwiseProduct(cur);
    if (!b.empty()) w -= b.back() * prev;
    {
      auto bview = basis.leftCols(k);
      w.noalias() -= bview * (bview.transpose() * w);
      w.noalias() -= bview * (bview.transpose() * w);
    }
    const double bn = w.norm();
    if (bn <= opts.tol * b_max) {
      out.krylov.terminated = LanczosTermination::b_below_tolerance;
      break;
    }
    b_max = std::max(b_max, bn);
    b.push_back(bn);
    prev = cur;
    cur = w / bn;
    if (k == cols) {
      cols = std::min<Eigen::Index>(n, cols * 2);
      basis.conservativeResize(Eigen::NoChange, cols);
    }
    basis.col(k++) = cur;

    if ((want_norm_stop || want_residual_stop) &&
        static_cast<long>(b.size()) >= opts.min_steps &&
        ++since_check >= opts.check_interval) {
      since_check = 0;
      const std::vector<double> a = prefix_alpha(b, opts.mu);
      if (!a.empty()) {
        if (want_residual_stop) {
          Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
          bool complete = true;
          for (std::size_t ai = 0; ai < a.size(); ++ai) {
            const Eigen::Index col = static_cast<Eigen::Index>(2 * ai + 1);
            if (col >= k) {
              complete = false;
              break;
            }
            s += a[ai] * basis.col(col);
          }
          if (complete &&
              node_gauge_residual(nodes, s, opts.mu) <= opts.residual_target) {
            out.functional_stop = true;
            break;
          }
        }
        if (want_norm_stop) {
          double norm_sq = 0.0;
          for (double ai : a) norm_sq += ai * ai;
          if (last_norm >= 0.0) {
            const double rel = std::abs(norm_sq - last_norm) /
                               std::max(norm_sq, 1e-300);
            stable = (rel <= opts.norm_rel_change) ? stable + 1 : 0;
            if (stable >= opts.stable_checks) {
              last_norm = norm_sq;
              out.functional_stop = true;
              break;
            }
          }
          last_norm = norm_sq;
        }
      }
    }
  }

  out.krylov.k_dim = b.size() + 1;
  if (opts.keep_vectors) out.vectors = basis.leftCols(k);
  return out;
}

Eigen::VectorXd node_solution(const SpectralLanczosResult& lan,
                              const std::vector<double>& a) {
  if (lan.vectors.size() == 0)
    throw config_error(
        "node_solution: Lanczos vectors were not retained "
        "(set keep_vectors)");
  const Eigen::Index k = lan.vectors.cols();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(lan.vectors.rows());
  for (std::size_t ai = 0; ai < a.size(); ++ai) {
    const Eigen::Index col = static_cast<Eigen::Index>(2 * ai + 1);
    if (col >= k)
      throw config_error(
          "node_solution: solution refers to Lanczos vectors beyond the "
          "computed chain");
    s += a[ai] * lan.vectors.col(col);
  }
  return s;
}

double node_gauge_residual(const FrequencyNodes& nodes,
                           const Eigen::VectorXd& s, double mu) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.omega.size());
  if (s.size() != n)
    throw config_error(
        "node_gauge_residual: solution vector does not match the node count");
  double acc = 0.0;
  for (Eigen::Index v = 0; v < n; ++v) {
    const double omv = nodes.omega[v];
    const double g = omv * std::sqrt(nodes.weight[v]) +
                     (omv * omv + mu * mu) * s(v);
    acc += g * g;
  }
  return std::sqrt(static_cast<double>(nodes.dim) * acc);
}

OperatorSum assemble_agp_dense(const FrequencyNodes& nodes,
                               const Eigen::VectorXd& s) {
  if (nodes.node_of_pair.empty())
    throw config_error(
        "assemble_agp_dense: frequency nodes were built without the pair map "
        "(set keep_pair_map)");
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.omega.size());
  if (s.size() != n)
    throw config_error(
        "assemble_agp_dense: solution vector does not match the node count");
  const Eigen::Index d = nodes.dim;
  const std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd a_eig = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index col = 0; col < d; ++col) {
      const std::int32_t node =
          nodes.node_of_pair[static_cast<std::size_t>(m * d + col)];
      if (node < 0) continue;
      const std::complex<double> m0 = nodes.m0(m, col);
      if (m0 == std::complex<double>(0.0, 0.0)) continue;
      a_eig(m, col) = iu * s(node) * m0 /
                      std::sqrt(nodes.weight[static_cast<std::size_t>(node)]);
    }
  }
  const Eigen::MatrixXcd a_orig = nodes.eigenvectors * a_eig *
                                  nodes.eigenvectors.adjoint();
  return OperatorSum::from_matrix(a_orig);
}

std::size_t lmg_structural_k_dim(double S, double J, double tol_rel) {
  ModelInstance model = build_model(
      "lmg", {{"S", S}, {"J", J}});
  const Eigen::MatrixXcd& h = model.hamiltonian.matrix();
  const Eigen::Index d = h.rows();
  const long two_s = std::lround(2.0 * S);

  // Parity basis: |m> +/- |-m> (m > 0), plus |0> in the even block when S is
  // integer.  Row k of the standard basis holds m = S - k.
  auto idx_of_m = [&](long two_m) -> Eigen::Index {
    return static_cast<Eigen::Index>((two_s - two_m) / 2);
  };
  std::vector<Eigen::VectorXd> even, odd;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (long two_m = two_s; two_m > 0; two_m -= 2) {
    Eigen::VectorXd vp = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd vm = Eigen::VectorXd::Zero(d);
    vp(idx_of_m(two_m)) = inv_sqrt2;
    vp(idx_of_m(-two_m)) = inv_sqrt2;
    vm(idx_of_m(two_m)) = inv_sqrt2;
    vm(idx_of_m(-two_m)) = -inv_sqrt2;
    even.push_back(vp);
    odd.push_back(vm);
  }
  if (two_s % 2 == 0) {
    Eigen::VectorXd v0 = Eigen::VectorXd::Zero(d);
    v0(idx_of_m(0)) = 1.0;
    even.push_back(v0);
  }

  std::vector<double> oms{0.0};
  for (const auto* block : {&even, &odd}) {
    const Eigen::Index nb = static_cast<Eigen::Index>(block->size());
    if (nb == 0) continue;
    Eigen::MatrixXd bmat(d, nb);
    for (Eigen::Index c = 0; c < nb; ++c) bmat.col(c) = (*block)[c];
    Eigen::MatrixXd hb = bmat.transpose() * h.real() * bmat;
    hb = (0.5 * (hb + hb.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hb);
    if (solver.info() != Eigen::Success)
      throw numerical_error(
          "lmg_structural_k_dim: parity-block eigensolver failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    for (Eigen::Index a = 0; a < nb; ++a)
      for (Eigen::Index c = 0; c < nb; ++c)
        if (a != c) oms.push_back(ev(a) - ev(c));
  }

  std::sort(oms.begin(), oms.end());
  double span = 0.0;
  for (double w : oms) span = std::max(span, std::abs(w));
  const double tol = tol_rel * std::max(1.0, span);
  std::size_t count = 1;
  for (std::size_t p = 1; p < oms.size(); ++p)
    if (oms[p] - oms[p - 1] > tol) ++count;
  return count;
}

}  // namespace agpk
