#include "agpk/pauli.hpp"

#include <bit>
#include <cctype>

#include "agpk/errors.hpp"

namespace agpk {

namespace {

void check_site_count(int n_sites) {
  if (n_sites < 0 || n_sites > PauliString::max_sites) {
    throw config_error("PauliString: site count must be in [0, 64]");
  }
}

}  // namespace

PauliString PauliString::identity(int n_sites) {
  check_site_count(n_sites);
  return PauliString{0, 0, n_sites};
}

PauliString PauliString::single(char axis, int site, int n_sites) {
  check_site_count(n_sites);
  if (site < 0 || site >= n_sites) {
    throw config_error("PauliString::single: site index out of range");
  }
  const std::uint64_t bit = std::uint64_t{1} << site;
  switch (std::tolower(static_cast<unsigned char>(axis))) {
    case 'x':
      return PauliString{bit, 0, n_sites};
    case 'y':
      return PauliString{bit, bit, n_sites};
    case 'z':
      return PauliString{0, bit, n_sites};
    default:
      throw config_error("PauliString::single: axis must be one of x, y, z");
  }
}

PauliString PauliString::two(char axis_a, int site_a, char axis_b, int site_b,
                             int n_sites) {
  if (site_a == site_b) {
    throw config_error("PauliString::two: sites must differ");
  }
  const PauliString a = single(axis_a, site_a, n_sites);
  const PauliString b = single(axis_b, site_b, n_sites);
  return PauliString{a.x_mask | b.x_mask, a.z_mask | b.z_mask, n_sites};
}

int PauliString::weight() const {
  return std::popcount(x_mask | z_mask);
}

PauliProduct pauli_multiply(const PauliString& p, const PauliString& q) {
  if (p.n_sites != q.n_sites) {
    throw config_error("pauli_multiply: mismatched site counts");
  }
  PauliString r{p.x_mask ^ q.x_mask, p.z_mask ^ q.z_mask, p.n_sites};
  // With P = i^{pc(x&z)} X^x Z^z, moving Z^{pz} across X^{qx} contributes
  // (-1)^{pc(pz & qx)}; the remaining phase rebalances the i^{pc(x&z)}
  // prefactors of the two factors against that of the product string.
  const int k = std::popcount(p.x_mask & p.z_mask) +
                std::popcount(q.x_mask & q.z_mask) -
                std::popcount(r.x_mask & r.z_mask) +
                2 * std::popcount(p.z_mask & q.x_mask);
  static constexpr std::complex<double> table[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return PauliProduct{table[((k % 4) + 4) % 4], r};
}

bool anticommutes(const PauliString& p, const PauliString& q) {
  const int s = std::popcount(p.x_mask & q.z_mask) +
                std::popcount(p.z_mask & q.x_mask);
  return (s & 1) != 0;
}

std::string to_string(const PauliString& p) {
  std::string s;
  s.reserve(static_cast<std::size_t>(p.n_sites));
  for (int i = 0; i < p.n_sites; ++i) {
    const bool x = (p.x_mask >> i) & 1;
    const bool z = (p.z_mask >> i) & 1;
    s += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return s;
}

}  // namespace agpk
