#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace agpk {

/// A tensor product of single-site Pauli operators, stored in the Hermitian
/// phase convention
///
///   P = i^{popcount(x_mask & z_mask)} * X^{x_mask} * Z^{z_mask},
///
/// so site i carries X when only bit i of x_mask is set, Z when only bit i of
/// z_mask is set, and Y when both bits are set.  Every stored string is
/// Hermitian, squares to the identity, and the family is trace-orthonormal
/// under Tr(P^dag Q) / 2^L (the identity string has norm 1).
struct PauliString {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int n_sites = 0;

  static constexpr int max_sites = 64;

  /// Identity string on `n_sites` sites.
  static PauliString identity(int n_sites);

  /// Single-site Pauli: axis is one of 'x', 'y', 'z' (case-insensitive).
  static PauliString single(char axis, int site, int n_sites);

  /// Two-site product of single-site Paulis (sites must differ).
  static PauliString two(char axis_a, int site_a, char axis_b, int site_b,
                         int n_sites);

  bool is_identity() const { return x_mask == 0 && z_mask == 0; }

  /// Weight = number of non-identity sites.
  int weight() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

struct PauliProduct {
  std::complex<double> phase;  ///< one of {+1, -1, +i, -i}
  PauliString r;
};

/// Exact product p*q = phase * r with the phase tracked in {+-1, +-i}.
/// Throws config_error on mismatched site counts.
PauliProduct pauli_multiply(const PauliString& p, const PauliString& q);

/// True when p and q anticommute; false when they commute (the only two
/// possibilities for Pauli strings).
bool anticommutes(const PauliString& p, const PauliString& q);

/// Human-readable label, site 0 first, e.g. "XIZY".
std::string to_string(const PauliString& p);

}  // namespace agpk
