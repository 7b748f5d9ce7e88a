#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <unordered_map>

#include "agpk/pauli.hpp"

namespace agpk {

enum class Backend { sparse_pauli, dense };

/// Hash key for a Pauli string inside one OperatorSum (fixed n_sites).
struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend bool operator==(const PauliKey&, const PauliKey&) = default;
};

struct PauliKeyHash {
  std::size_t operator()(const PauliKey& k) const noexcept {
    // splitmix64-style mix of the two masks.
    std::uint64_t h = k.x * 0x9e3779b97f4a7c15ULL ^ (k.z + 0xbf58476d1ce4e5b9ULL);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

/// A linear combination of Pauli strings (sparse backend) or a square complex
/// matrix (dense backend).  Both backends expose the same algebra -- scaling,
/// linear combination, commutators, and the trace inner product
/// (A|B) = Tr(A^dag B) / dim -- so higher layers are backend-agnostic.
///
/// Sparse coefficients with magnitude at or below `kDropTolerance` are erased
/// after every algebra operation to stop noise-driven fill-in during nested
/// commutators.
class OperatorSum {
 public:
  using TermMap =
      std::unordered_map<PauliKey, std::complex<double>, PauliKeyHash>;

  static constexpr double kDropTolerance = 1e-14;

  OperatorSum() = default;

  /// Empty (zero) operator in the sparse Pauli backend on `n_sites` sites.
  static OperatorSum sparse(int n_sites);

  /// Zero operator in the dense backend with the given matrix dimension.
  static OperatorSum dense(Eigen::Index dim);

  /// Dense operator adopting the given matrix.
  static OperatorSum from_matrix(Eigen::MatrixXcd m);

  Backend backend() const noexcept { return backend_; }
  bool is_sparse() const noexcept { return backend_ == Backend::sparse_pauli; }

  /// Site count.  Sparse: the lattice size; dense: -1 unless the operator was
  /// produced by to_dense (which records the originating site count).
  int n_sites() const noexcept { return n_sites_; }

  /// Hilbert-space dimension: 2^L for the sparse backend, the matrix
  /// dimension for the dense backend.
  double hilbert_dim() const;

  // --- sparse access ------------------------------------------------------
  /// Accumulate c * p into the sum.  Sparse backend only.
  void add_term(const PauliString& p, std::complex<double> c);
  std::complex<double> coefficient(const PauliString& p) const;
  const TermMap& terms() const;
  std::size_t term_count() const;

  // --- dense access -------------------------------------------------------
  const Eigen::MatrixXcd& matrix() const;
  Eigen::MatrixXcd& matrix();

  // --- shared algebra -----------------------------------------------------
  void scale(std::complex<double> s);
  /// *this += s * other.  Backends and dimensions must match.
  void add_scaled(const OperatorSum& other, std::complex<double> s);
  /// Erase sparse coefficients with |c| <= drop_tol (no-op for dense).
  void compress(double drop_tol = kDropTolerance);
  bool is_zero(double tol = kDropTolerance) const;

 private:
  Backend backend_ = Backend::sparse_pauli;
  int n_sites_ = 0;
  TermMap terms_;
  Eigen::MatrixXcd matrix_;

  friend OperatorSum to_dense(const OperatorSum& o, int site_cap);
};

/// [a, b] = a*b - b*a.  Backends and dimensions must match.  The commutator of
/// Hermitian operators is anti-Hermitian; coefficient-wise
/// commutator(a,b) == -commutator(b,a) holds exactly.
OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);

/// Liouvillian application L(o) = [h, o].
OperatorSum liouvillian_apply(const OperatorSum& h, const OperatorSum& o);

/// Trace inner product (a|b) = Tr(a^dag b) / dim.  For the sparse backend this
/// is sum_P conj(coeff_a(P)) * coeff_b(P) by trace-orthonormality of the
/// Pauli strings.  (a|a) is real and >= 0.
std::complex<double> inner_product(const OperatorSum& a, const OperatorSum& b);

/// Frobenius norm ||o||_F = sqrt(dim * (o|o)).
double frobenius_norm(const OperatorSum& o);

/// Convert a sparse operator to the dense backend (2^L x 2^L matrix).  Dense
/// inputs are returned unchanged.  Throws resource_error when the site count
/// exceeds `site_cap`.
OperatorSum to_dense(const OperatorSum& o, int site_cap = 12);

/// Hermiticity check: sparse operators are Hermitian iff every coefficient is
/// real (the stored strings are Hermitian); dense operators are compared
/// against their adjoint.  `tol` bounds the allowed violation.
bool is_hermitian(const OperatorSum& o, double tol = 1e-12);

}  // namespace agpk
