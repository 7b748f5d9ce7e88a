#include "agpk/exact_oracle.hpp"

#include <cmath>

#include "agpk/errors.hpp"

namespace agpk {

namespace {

// Degeneracy threshold relative to the spectral scale.
double degeneracy_tol(const Eigen::VectorXd& energies) {
  const double scale =
      energies.size() > 0 ? energies.cwiseAbs().maxCoeff() : 0.0;
  return 1e-12 * std::max(1.0, scale);
}

}  // namespace

Spectrum eigendecompose(const OperatorSum& h, Eigen::Index dim_cap) {
  // The sparse path goes through to_dense, whose 12-site cap coincides with
  // the default 4096-dimension cap here.
  const OperatorSum dense_h = h.is_sparse() ? to_dense(h) : h;
  const Eigen::MatrixXcd& m = dense_h.matrix();
  if (m.rows() > dim_cap) {
    throw resource_error("eigendecompose: dimension " +
                         std::to_string(m.rows()) +
                         " exceeds the cap of " + std::to_string(dim_cap));
  }
  if (!is_hermitian(dense_h, 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
    throw config_error("eigendecompose: operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      (m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("eigendecompose: eigensolver failed to converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors(), m.rows()};
}

EigenbasisOperator to_eigenbasis(const OperatorSum& h, const OperatorSum& o,
                                 Eigen::Index dim_cap) {
  Spectrum spec = eigendecompose(h, dim_cap);
  const OperatorSum dense_o = o.is_sparse() ? to_dense(o) : o;
  if (dense_o.matrix().rows() != spec.dim) {
    throw config_error("to_eigenbasis: operator/Hamiltonian dimension mismatch");
  }
  Eigen::MatrixXcd rotated = spec.eigenvectors.adjoint() *
                             dense_o.matrix() * spec.eigenvectors;
  return EigenbasisOperator{std::move(spec), std::move(rotated)};
}

double agp_norm_exact(const EigenbasisOperator& d_h, double mu,
                      bool normalized) {
  const Eigen::Index dim = d_h.spectrum.dim;
  const double tol_deg = degeneracy_tol(d_h.spectrum.eigenvalues);
  const double mu2 = mu * mu;
  double acc = 0.0;
  double total_weight = 0.0;
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      const double coupling_sq = std::norm(d_h.elements(m, n));
      total_weight += coupling_sq;
      if (m == n) continue;
      const double omega =
          d_h.spectrum.eigenvalues[m] - d_h.spectrum.eigenvalues[n];
      if (std::abs(omega) <= tol_deg) {
        if (mu2 == 0.0 && coupling_sq >= 1e-24) {
          throw numerical_error(
              "agp_norm_exact: divergent at mu = 0 -- degenerate pair with "
              "nonzero coupling; use a positive regulator such as "
              "default_regulator");
        }
        continue;  // weight 0 for mu > 0
      }
      const double w2 = omega * omega;
      const double denom = mu2 + w2;
      acc += coupling_sq * w2 / (denom * denom);
    }
  }
  const double dim_d = static_cast<double>(dim);
  double norm = acc / dim_d;
  if (normalized) {
    const double def_norm_sq = total_weight / dim_d;  // (dH|dH)
    if (def_norm_sq <= 0.0) {
      throw config_error("agp_norm_exact: zero deformation operator");
    }
    norm /= def_norm_sq;
  }
  return norm;
}

double agp_norm_exact(const OperatorSum& h, const OperatorSum& d_h, double mu,
                      bool normalized) {
  return agp_norm_exact(to_eigenbasis(h, d_h), mu, normalized);
}

OperatorSum agp_matrix_exact(const OperatorSum& h, const OperatorSum& d_h,
                             double mu) {
  const EigenbasisOperator op = to_eigenbasis(h, d_h);
  const Eigen::Index dim = op.spectrum.dim;
  const double tol_deg = degeneracy_tol(op.spectrum.eigenvalues);
  const double mu2 = mu * mu;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  const std::complex<double> minus_i{0.0, -1.0};
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      if (m == n) continue;
      const double omega =
          op.spectrum.eigenvalues[m] - op.spectrum.eigenvalues[n];
      if (std::abs(omega) <= tol_deg) {
        if (mu2 == 0.0 && std::norm(op.elements(m, n)) >= 1e-24) {
          throw numerical_error(
              "agp_matrix_exact: divergent at mu = 0 -- degenerate pair with "
              "nonzero coupling; use a positive regulator such as "
              "default_regulator");
        }
        continue;
      }
      a(m, n) = minus_i * (omega / (mu2 + omega * omega)) * op.elements(m, n);
    }
  }
  return OperatorSum::from_matrix(op.spectrum.eigenvectors * a *
                                  op.spectrum.eigenvectors.adjoint());
}

double autocorrelation(const EigenbasisOperator& o, double t) {
  const Eigen::Index dim = o.spectrum.dim;
  double acc = 0.0;
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      const double coupling_sq = std::norm(o.elements(m, n));
      if (coupling_sq == 0.0) continue;
      const double omega =
          o.spectrum.eigenvalues[m] - o.spectrum.eigenvalues[n];
      acc += coupling_sq * std::cos(omega * t);
    }
  }
  return acc / static_cast<double>(dim);
}

double autocorrelation(const OperatorSum& h, const OperatorSum& o_normalized,
                       double t) {
  const double ip = std::real(inner_product(o_normalized, o_normalized));
  if (std::abs(ip - 1.0) > 1e-8) {
    throw config_error("autocorrelation: operator is not normalized");
  }
  return autocorrelation(to_eigenbasis(h, o_normalized), t);
}

ResponseSamples response_function(const OperatorSum& h, const OperatorSum& d_h,
                                  double bin_width, double omega_max) {
  const EigenbasisOperator op = to_eigenbasis(h, d_h);
  const Eigen::Index dim = op.spectrum.dim;

  double max_abs_omega = 0.0;
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      if (m == n) continue;
      max_abs_omega = std::max(
          max_abs_omega, std::abs(op.spectrum.eigenvalues[m] -
                                  op.spectrum.eigenvalues[n]));
    }
  }
  if (omega_max <= 0.0) omega_max = std::max(max_abs_omega, 1e-12);
  if (bin_width <= 0.0) bin_width = omega_max / 200.0;

  const auto n_bins = static_cast<std::size_t>(
      std::max(1.0, std::ceil(omega_max / bin_width - 1e-9)));
  ResponseSamples samples;
  samples.bin_width = bin_width;
  samples.values.assign(n_bins, 0.0);
  samples.omega_centers.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    samples.omega_centers[k] = (static_cast<double>(k) + 0.5) * bin_width;
  }
  const double norm_factor = static_cast<double>(dim) * bin_width;
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      if (m == n) continue;
      const double omega = std::abs(op.spectrum.eigenvalues[m] -
                                    op.spectrum.eigenvalues[n]);
      if (omega > omega_max) continue;
      auto k = static_cast<std::size_t>(omega / bin_width);
      if (k >= n_bins) k = n_bins - 1;
      samples.values[k] += std::norm(op.elements(m, n)) / norm_factor;
    }
  }
  return samples;
}

}  // namespace agpk
