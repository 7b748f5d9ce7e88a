#include "agpk/operator_sum.hpp"

#include <bit>
#include <cmath>
#include <utility>

#include "agpk/errors.hpp"

namespace agpk {

namespace {

void require_same_shape(const OperatorSum& a, const OperatorSum& b,
                        const char* what) {
  if (a.backend() != b.backend()) {
    throw config_error(std::string(what) + ": backend mismatch");
  }
  if (a.is_sparse()) {
    if (a.n_sites() != b.n_sites()) {
      throw config_error(std::string(what) + ": mismatched site counts");
    }
  } else if (a.matrix().rows() != b.matrix().rows()) {
    throw config_error(std::string(what) + ": mismatched matrix dimensions");
  }
}

}  // namespace

OperatorSum OperatorSum::sparse(int n_sites) {
  if (n_sites < 0 || n_sites > PauliString::max_sites) {
    throw config_error("OperatorSum::sparse: site count must be in [0, 64]");
  }
  OperatorSum o;
  o.backend_ = Backend::sparse_pauli;
  o.n_sites_ = n_sites;
  return o;
}

OperatorSum OperatorSum::dense(Eigen::Index dim) {
  if (dim <= 0) {
    throw config_error("OperatorSum::dense: dimension must be positive");
  }
  OperatorSum o;
  o.backend_ = Backend::dense;
  o.n_sites_ = -1;
  o.matrix_ = Eigen::MatrixXcd::Zero(dim, dim);
  return o;
}

OperatorSum OperatorSum::from_matrix(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw config_error("OperatorSum::from_matrix: matrix must be square");
  }
  OperatorSum o;
  o.backend_ = Backend::dense;
  o.n_sites_ = -1;
  o.matrix_ = std::move(m);
  return o;
}

double OperatorSum::hilbert_dim() const {
  if (is_sparse()) return std::ldexp(1.0, n_sites_);
  return static_cast<double>(matrix_.rows());
}

void OperatorSum::add_term(const PauliString& p, std::complex<double> c) {
  if (!is_sparse()) {
    throw config_error("OperatorSum::add_term: dense backend has no terms");
  }
  if (p.n_sites != n_sites_) {
    throw config_error("OperatorSum::add_term: mismatched site counts");
  }
  terms_[PauliKey{p.x_mask, p.z_mask}] += c;
}

std::complex<double> OperatorSum::coefficient(const PauliString& p) const {
  if (!is_sparse()) {
    throw config_error("OperatorSum::coefficient: dense backend has no terms");
  }
  auto it = terms_.find(PauliKey{p.x_mask, p.z_mask});
  return it == terms_.end() ? std::complex<double>{0.0, 0.0} : it->second;
}

const OperatorSum::TermMap& OperatorSum::terms() const {
  if (!is_sparse()) {
    throw config_error("OperatorSum::terms: dense backend has no terms");
  }
  return terms_;
}

std::size_t OperatorSum::term_count() const {
  return is_sparse() ? terms_.size() : 0;
}

const Eigen::MatrixXcd& OperatorSum::matrix() const {
  if (is_sparse()) {
    throw config_error("OperatorSum::matrix: sparse backend has no matrix");
  }
  return matrix_;
}

Eigen::MatrixXcd& OperatorSum::matrix() {
  if (is_sparse()) {
    throw config_error("OperatorSum::matrix: sparse backend has no matrix");
  }
  return matrix_;
}

void OperatorSum::scale(std::complex<double> s) {
  if (is_sparse()) {
    for (auto& [key, c] : terms_) c *= s;
    compress();
  } else {
    matrix_ *= s;
  }
}

void OperatorSum::add_scaled(const OperatorSum& other, std::complex<double> s) {
  require_same_shape(*this, other, "OperatorSum::add_scaled");
  if (is_sparse()) {
    for (const auto& [key, c] : other.terms_) terms_[key] += s * c;
    compress();
  } else {
    matrix_ += s * other.matrix_;
  }
}

void OperatorSum::compress(double drop_tol) {
  if (!is_sparse()) return;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= drop_tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

bool OperatorSum::is_zero(double tol) const {
  if (is_sparse()) {
    for (const auto& [key, c] : terms_) {
      if (std::abs(c) > tol) return false;
    }
    return true;
  }
  return matrix_.cwiseAbs().maxCoeff() <= tol;
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  require_same_shape(a, b, "commutator");
  if (!a.is_sparse()) {
    return OperatorSum::from_matrix(a.matrix() * b.matrix() -
                                    b.matrix() * a.matrix());
  }
  // [P, Q] = 2 P Q when P, Q anticommute and 0 otherwise, so only
  // anticommuting pairs contribute.
  OperatorSum out = OperatorSum::sparse(a.n_sites());
  const int n = a.n_sites();
  for (const auto& [pk, pc] : a.terms()) {
    const PauliString p{pk.x, pk.z, n};
    for (const auto& [qk, qc] : b.terms()) {
      const PauliString q{qk.x, qk.z, n};
      if (!anticommutes(p, q)) continue;
      const PauliProduct prod = pauli_multiply(p, q);
      out.add_term(prod.r, 2.0 * prod.phase * pc * qc);
    }
  }
  out.compress();
  return out;
}

OperatorSum liouvillian_apply(const OperatorSum& h, const OperatorSum& o) {
  return commutator(h, o);
}

std::complex<double> inner_product(const OperatorSum& a, const OperatorSum& b) {
  require_same_shape(a, b, "inner_product");
  if (a.is_sparse()) {
    // Iterate the smaller map and look entries up in the larger one.
    const bool a_smaller = a.term_count() <= b.term_count();
    const auto& small = a_smaller ? a.terms() : b.terms();
    const auto& large = a_smaller ? b.terms() : a.terms();
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [key, c] : small) {
      auto it = large.find(key);
      if (it == large.end()) continue;
      acc += a_smaller ? std::conj(c) * it->second : std::conj(it->second) * c;
    }
    return acc;
  }
  const std::complex<double> tr =
      a.matrix().conjugate().cwiseProduct(b.matrix()).sum();
  return tr / static_cast<double>(a.matrix().rows());
}

double frobenius_norm(const OperatorSum& o) {
  const double ip = std::real(inner_product(o, o));
  return std::sqrt(std::max(0.0, ip) * o.hilbert_dim());
}

OperatorSum to_dense(const OperatorSum& o, int site_cap) {
  if (!o.is_sparse()) return o;
  const int L = o.n_sites();
  if (L > site_cap) {
    throw resource_error(
        "to_dense: site count " + std::to_string(L) +
        " exceeds the dense-conversion cap of " + std::to_string(site_cap));
  }
  const Eigen::Index dim = Eigen::Index{1} << L;
  OperatorSum out = OperatorSum::dense(dim);
  Eigen::MatrixXcd& m = out.matrix();
  static constexpr std::complex<double> iphase[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  for (const auto& [key, c] : o.terms()) {
    // P|s> = i^{pc(x&z)} (-1)^{pc(z&s)} |s^x>.
    const std::complex<double> base =
        c * iphase[std::popcount(key.x & key.z) % 4];
    for (Eigen::Index s = 0; s < dim; ++s) {
      const auto su = static_cast<std::uint64_t>(s);
      const double sign =
          (std::popcount(key.z & su) & 1) != 0 ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(su ^ key.x), s) += base * sign;
    }
  }
  out.n_sites_ = L;
  return out;
}

bool is_hermitian(const OperatorSum& o, double tol) {
  if (o.is_sparse()) {
    for (const auto& [key, c] : o.terms()) {
      if (std::abs(std::imag(c)) > tol) return false;
    }
    return true;
  }
  return (o.matrix() - o.matrix().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace agpk
