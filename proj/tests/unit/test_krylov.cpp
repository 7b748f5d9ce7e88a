#include <cmath>
#include <complex>
#include <vector>

#include "agpk/errors.hpp"
#include "agpk/krylov.hpp"
#include "agpk/model.hpp"
#include "fixture.hpp"

using namespace agpk;
using agpk_test::check_near;
using agpk_test::fx;
using agpk_test::to_vec;

namespace {

KrylovData chain_of(const std::string& name,
                    const std::map<std::string, double>& params,
                    bool keep_basis = false) {
  ModelInstance m = build_model(name, params);
  NormalizedDeformation nd = normalized_deformation(m);
  LanczosOptions opts;
  opts.keep_basis = keep_basis;
  return lanczos(m.hamiltonian, nd.o0, opts);
}

}  // namespace

TEST_SUITE("krylov") {

TEST_CASE("two-level system closes after two exact coefficients") {
  KrylovData k = chain_of("two_level", {{"lambda", 1.0}, {"delta", 1.0}});
  REQUIRE(k.b.size() == 2);
  check_near(k.b[0], 2.0, 1e-12);
  check_near(k.b[1], 2.0, 1e-12);
  CHECK(k.k_dim == 3);
  CHECK(k.terminated == LanczosTermination::b_below_tolerance);
}

TEST_CASE("two-qubit system at the symmetric point") {
  KrylovData k = chain_of("two_qubit", {{"epsilon", 1.0}, {"lambda", 0.0}});
  REQUIRE(k.b.size() == 2);
  check_near(k.b[0], 2.0, 1e-12);
  check_near(k.b[1], 4.0, 1e-12);
}

TEST_CASE("four-body coefficients match the closed forms and the reference") {
  for (const char* key : {"0.5", "1.0", "1.5"}) {
    CAPTURE(key);
    const double lam = std::stod(key);
    KrylovData k = chain_of("four_body", {{"lambda", lam}});
    const std::vector<double> want =
        to_vec(fx()["models"]["four_body_mu025"][key]["b"]);
    REQUIRE(k.b.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      check_near(k.b[i], want[i], 1e-9);
    }
    // Closed forms for the six-link chain of the four-site ring.
    const double l2 = lam * lam;
    const double q = 36.0 * l2 * l2 * l2 + 101.0 * l2 * l2 + 224.0 * l2 + 256.0;
    const double closed[6] = {
        2.0 * std::sqrt(2.0),
        std::sqrt(8.0 + 10.0 * l2),
        std::sqrt(2.0 * l2 * (9.0 * l2 + 32.0) / (5.0 * l2 + 4.0)),
        2.0 * std::sqrt((72.0 * l2 * l2 * l2 + 202.0 * l2 * l2 + 448.0 * l2 + 512.0) /
                        (45.0 * l2 * l2 + 196.0 * l2 + 128.0)),
        2.0 * lam * std::sqrt((5.0 * l2 + 4.0) * std::pow(16.0 - 9.0 * l2, 2) /
                              ((9.0 * l2 + 32.0) * q)),
        4.0 * lam * std::sqrt((9.0 * l2 + 32.0) * (l2 * l2 + 2.0 * l2 + 4.0) / q),
    };
    for (int i = 0; i < 6; ++i) check_near(k.b[i], closed[i], 1e-8);
  }
}

TEST_CASE("degenerate deformation closes the space immediately") {
  // The ladder model's deformation is proportional to its Hamiltonian, so the
  // first commutator vanishes and the chain is empty.
  KrylovData k = chain_of("su2_ladder", {{"S", 3.0}, {"alpha", 0.8}});
  CHECK(k.b.empty());
  CHECK(k.k_dim == 1);
  CHECK(k.terminated == LanczosTermination::b_below_tolerance);
}

TEST_CASE("retained basis is orthonormal and parity-alternating") {
  ModelInstance m = build_model("four_body", {{"lambda", 1.0}});
  NormalizedDeformation nd = normalized_deformation(m);
  LanczosOptions opts;
  opts.keep_basis = true;
  KrylovData k = lanczos(m.hamiltonian, nd.o0, opts);
  REQUIRE(k.basis.size() == static_cast<std::size_t>(k.k_dim));
  for (std::size_t i = 0; i < k.basis.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double want = (i == j) ? 1.0 : 0.0;
      check_near(inner_product(k.basis[i], k.basis[j]).real(), want, 0.0, 1e-10);
      check_near(inner_product(k.basis[i], k.basis[j]).imag(), 0.0, 0.0, 1e-10);
    }
    // Even indices Hermitian, odd indices anti-Hermitian.
    OperatorSum probe = k.basis[i];
    if (i % 2 == 1) probe.scale(std::complex<double>(0.0, 1.0));
    CHECK(is_hermitian(probe, 1e-10));
  }
}

TEST_CASE("step cap reports max_steps termination") {
  ModelInstance m = build_model("four_body", {{"lambda", 1.0}});
  NormalizedDeformation nd = normalized_deformation(m);
  LanczosOptions opts;
  opts.max_steps = 3;
  KrylovData k = lanczos(m.hamiltonian, nd.o0, opts);
  CHECK(k.b.size() == 3);
  CHECK(k.terminated == LanczosTermination::max_steps);
}

TEST_CASE("lanczos rejects an unnormalized start") {
  ModelInstance m = build_model("two_level", {{"lambda", 1.0}, {"delta", 1.0}});
  CHECK_THROWS_AS(lanczos(m.hamiltonian, m.hamiltonian), config_error);
}

TEST_CASE("chain amplitudes: single-link rotation") {
  PsiTable tab = propagate_psi({1.0}, {0.0, 0.3, 1.0, 2.0});
  REQUIRE(tab.psi.rows() == 4);
  REQUIRE(tab.psi.cols() == 2);
  for (int i = 0; i < 4; ++i) {
    const double t = tab.t[i];
    check_near(tab.psi(i, 0), std::cos(t), 1e-8, 1e-8);
    check_near(tab.psi(i, 1), std::sin(t), 1e-8, 1e-8);
  }
  CHECK(tab.max_norm_drift <= 1e-8);
}

TEST_CASE("chain amplitudes: two-link chain gives the two-level return") {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.05 * i);
  PsiTable tab = propagate_psi({2.0, 2.0}, grid);
  for (int i = 0; i <= 40; ++i) {
    const double t = grid[i];
    const double want = (1.0 + std::cos(2.0 * std::sqrt(2.0) * t)) / 2.0;
    check_near(tab.psi(i, 0), want, 0.0, 1e-9);
  }
}

TEST_CASE("chain amplitude grids must be sane") {
  CHECK_THROWS_AS(propagate_psi({1.0}, {1.0, 0.5}), config_error);
  CHECK_THROWS_AS(propagate_psi({1.0}, {-1.0, 0.5}), config_error);
  CHECK_THROWS_AS(propagate_psi({}, {0.0, 1.0}), config_error);
}

TEST_CASE("moment walk reproduces the Gaussian moments") {
  // b_n = sqrt(n) generates C(t) = exp(-t^2/2) with moments (2n-1)!!.
  std::vector<double> b;
  for (int n = 1; n <= 6; ++n) b.push_back(std::sqrt(double(n)));
  std::vector<double> m = moments_from_lanczos(b, 12);
  REQUIRE(m.size() == 7);
  const double want[] = {1, 1, 3, 15, 105, 945, 10395};
  for (int i = 0; i <= 6; ++i) check_near(m[i], want[i], 1e-12);
}

TEST_CASE("constant chain walks like Catalan numbers") {
  std::vector<double> m = moments_from_lanczos({1, 1, 1, 1, 1}, 10);
  const double want[] = {1, 1, 2, 5, 14, 42};
  for (int i = 0; i <= 5; ++i) check_near(m[i], want[i], 1e-12);
}

TEST_CASE("moments and coefficients round-trip") {
  const std::vector<std::vector<double>> chains = {
      {1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0, std::sqrt(5.0), std::sqrt(6.0)},
      {1.0, 1.0, 1.0, 1.0, 1.0},
      {2.0, 2.0},
  };
  for (const auto& b : chains) {
    std::vector<double> m = moments_from_lanczos(b, 2 * int(b.size()));
    std::vector<double> back = lanczos_from_moments(m);
    REQUIRE(back.size() == b.size());
    for (std::size_t i = 0; i < b.size(); ++i) check_near(back[i], b[i], 1e-10);
  }
}

TEST_CASE("moment recursion rejects non-realizable sequences") {
  // m4 >= m2^2 is required of any positive measure: (1, 1, 0.5) violates it.
  CHECK_THROWS_AS(lanczos_from_moments({1.0, 1.0, 0.5}), numerical_error);
  // m0 must be 1.
  CHECK_THROWS_AS(lanczos_from_moments({2.0, 1.0}), config_error);
}

TEST_CASE("moment order limits") {
  CHECK_THROWS_AS(moments_from_lanczos({1.0}, 6), config_error);
  std::vector<double> m = moments_from_lanczos({1.0}, 2);
  REQUIRE(m.size() == 2);
  check_near(m[1], 1.0, 1e-15);
}

}  // TEST_SUITE
