#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agpk/operator_sum.hpp"

namespace agpk {

/// A Hamiltonian family member H(lambda) together with its deformation
/// operator dH/dlambda (unnormalized), the parameter values it was built
/// from, and the model's default regulator.
struct ModelInstance {
  std::string name;
  OperatorSum hamiltonian;
  OperatorSum deformation;
  std::map<std::string, double> parameters;
  std::int64_t hilbert_dim = 0;
  double default_mu = 0.0;
  /// Divisor used for per-size norm reporting: the chain length L for lattice
  /// models, the site count for the fixed small systems, and 2S+1 for the
  /// collective-spin models.
  double size_scale = 1.0;
};

/// Builds a model by name.  Recognized names and parameter keys:
///   two_level{lambda, delta}        H = lambda*Z + delta*X           (1 site)
///   two_qubit{epsilon, lambda}      H = -(X1X2 + Z1Z2) - eps(1-lambda)(Z1+Z2)
///   four_body{lambda}               H = sum_i X_i X_{i+1 mod 4} + lambda(Z1+Z2)
///   ising_periodic{L, h}            H = sum ZZ + h sum X   (periodic)
///   chaotic_ising{L, hx, hz}        H = sum ZZ + hx sum X + hz sum Z (periodic;
///                                   hz defaults to (sqrt(5)+1)/4)
///   xxz_open{L, delta}              H = sum (XX + YY + delta ZZ)     (open)
///   lmg{S, J}                       H = Sx/S + 2J (Sz/S)^2           (dense)
///   su2_ladder{S, alpha}            H = alpha (J+ + J-)              (dense)
/// The deformation operator is the derivative of H with respect to the
/// model's sweep parameter: lambda, lambda, lambda, h, hx, delta, lambda=2J,
/// and alpha respectively.
/// Throws config_error for unknown names, missing or invalid parameters,
/// non-half-integer spins, or chain lengths below 2.
ModelInstance build_model(const std::string& name,
                          const std::map<std::string, double>& params);

/// The regulator convention used throughout: chains (including the four-site
/// ring) use L * 2^-L; the collective-spin models use (2S+1) * 2^-(2S+1);
/// the non-degenerate two_level and two_qubit systems use 0 (the mu -> 0
/// limit is well defined there).
double default_regulator(const ModelInstance& m);

struct NormalizedDeformation {
  /// o0 = deformation / norm with (o0|o0) = 1.
  OperatorSum o0;
  /// norm = sqrt((dH|dH)); norm^2 multiplies normalized AGP norms to recover
  /// the physical (unnormalized) convention.
  double norm = 0.0;

  double norm_sq() const { return norm * norm; }
};

/// Throws config_error when the deformation operator is zero.
NormalizedDeformation normalized_deformation(const ModelInstance& m);

/// Names accepted by build_model, in CLI display order.
const std::vector<std::string>& known_models();

}  // namespace agpk
