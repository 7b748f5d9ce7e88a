#include "agpk/model.hpp"

#include <cmath>
#include <set>

#include "agpk/errors.hpp"

namespace agpk {

namespace {

class ParamReader {
 public:
  ParamReader(std::string model, const std::map<std::string, double>& params)
      : model_(std::move(model)), params_(params) {}

  double required(const std::string& key) {
    auto it = params_.find(key);
    if (it == params_.end()) {
      throw config_error("model '" + model_ + "' requires parameter '" + key +
                         "'");
    }
    seen_.insert(key);
    return it->second;
  }

  double optional(const std::string& key, double fallback) {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    seen_.insert(key);
    return it->second;
  }

  int required_int(const std::string& key) {
    const double v = required(key);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) {
      throw config_error("model '" + model_ + "' parameter '" + key +
                         "' must be an integer");
    }
    return static_cast<int>(r);
  }

  /// Spin quantum number: positive integer or half-integer.
  double required_spin(const std::string& key) {
    const double s = required(key);
    const double twos = 2.0 * s;
    if (s <= 0 || std::abs(twos - std::round(twos)) > 1e-9) {
      throw config_error("model '" + model_ + "' parameter '" + key +
                         "' must be a positive integer or half-integer spin");
    }
    return std::round(twos) / 2.0;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : params_) {
      if (!seen_.count(key)) {
        throw config_error("model '" + model_ + "' has no parameter '" + key +
                           "'");
      }
    }
  }

 private:
  std::string model_;
  const std::map<std::string, double>& params_;
  std::set<std::string> seen_;
};

int chain_length(ParamReader& reader) {
  const int L = reader.required_int("L");
  if (L < 2) {
    throw config_error("chain models require L >= 2");
  }
  if (L > 62) {
    throw resource_error("chain length exceeds the supported maximum of 62");
  }
  return L;
}

double chain_regulator(int L) { return L * std::ldexp(1.0, -L); }

double spin_regulator(double S) {
  const double d = 2.0 * S + 1.0;
  return d * std::exp2(-d);
}

/// Spin-S operators in the |S, m> basis ordered m = S, S-1, ..., -S.
struct SpinOps {
  Eigen::MatrixXcd sx;
  Eigen::MatrixXcd sz;
};

SpinOps spin_matrices(double S) {
  const auto d = static_cast<Eigen::Index>(std::lround(2.0 * S)) + 1;
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = S - static_cast<double>(k);
    sz(k, k) = m;
    if (k >= 1) {
      sp(k - 1, k) = std::sqrt(S * (S + 1.0) - m * (m + 1.0));
    }
  }
  return SpinOps{(sp + sp.adjoint()) / 2.0, std::move(sz)};
}

ModelInstance make_two_level(ParamReader& reader) {
  const double lambda = reader.required("lambda");
  const double delta = reader.required("delta");
  OperatorSum h = OperatorSum::sparse(1);
  h.add_term(PauliString::single('z', 0, 1), lambda);
  h.add_term(PauliString::single('x', 0, 1), delta);
  OperatorSum dh = OperatorSum::sparse(1);
  dh.add_term(PauliString::single('z', 0, 1), 1.0);
  return ModelInstance{"two_level", std::move(h), std::move(dh),
                       {{"lambda", lambda}, {"delta", delta}},
                       2, 0.0, 1.0};
}

ModelInstance make_two_qubit(ParamReader& reader) {
  const double eps = reader.required("epsilon");
  const double lambda = reader.required("lambda");
  OperatorSum h = OperatorSum::sparse(2);
  h.add_term(PauliString::two('x', 0, 'x', 1, 2), -1.0);
  h.add_term(PauliString::two('z', 0, 'z', 1, 2), -1.0);
  h.add_term(PauliString::single('z', 0, 2), -eps * (1.0 - lambda));
  h.add_term(PauliString::single('z', 1, 2), -eps * (1.0 - lambda));
  OperatorSum dh = OperatorSum::sparse(2);
  dh.add_term(PauliString::single('z', 0, 2), eps);
  dh.add_term(PauliString::single('z', 1, 2), eps);
  return ModelInstance{"two_qubit", std::move(h), std::move(dh),
                       {{"epsilon", eps}, {"lambda", lambda}},
                       4, 0.0, 2.0};
}

ModelInstance make_four_body(ParamReader& reader) {
  const double lambda = reader.required("lambda");
  constexpr int L = 4;
  OperatorSum h = OperatorSum::sparse(L);
  for (int i = 0; i < L; ++i) {
    h.add_term(PauliString::two('x', i, 'x', (i + 1) % L, L), 1.0);
  }
  h.add_term(PauliString::single('z', 1, L), lambda);
  h.add_term(PauliString::single('z', 2, L), lambda);
  OperatorSum dh = OperatorSum::sparse(L);
  dh.add_term(PauliString::single('z', 1, L), 1.0);
  dh.add_term(PauliString::single('z', 2, L), 1.0);
  return ModelInstance{"four_body", std::move(h), std::move(dh),
                       {{"lambda", lambda}},
                       16, chain_regulator(L), static_cast<double>(L)};
}

ModelInstance make_ising_periodic(ParamReader& reader) {
  const int L = chain_length(reader);
  const double hfield = reader.required("h");
  OperatorSum h = OperatorSum::sparse(L);
  OperatorSum dh = OperatorSum::sparse(L);
  for (int i = 0; i < L; ++i) {
    h.add_term(PauliString::two('z', i, 'z', (i + 1) % L, L), 1.0);
    h.add_term(PauliString::single('x', i, L), hfield);
    dh.add_term(PauliString::single('x', i, L), 1.0);
  }
  return ModelInstance{"ising_periodic", std::move(h), std::move(dh),
                       {{"L", static_cast<double>(L)}, {"h", hfield}},
                       std::int64_t{1} << L, chain_regulator(L),
                       static_cast<double>(L)};
}

ModelInstance make_chaotic_ising(ParamReader& reader) {
  const int L = chain_length(reader);
  const double hx = reader.required("hx");
  const double hz = reader.optional("hz", (std::sqrt(5.0) + 1.0) / 4.0);
  OperatorSum h = OperatorSum::sparse(L);
  OperatorSum dh = OperatorSum::sparse(L);
  for (int i = 0; i < L; ++i) {
    h.add_term(PauliString::two('z', i, 'z', (i + 1) % L, L), 1.0);
    h.add_term(PauliString::single('x', i, L), hx);
    h.add_term(PauliString::single('z', i, L), hz);
    dh.add_term(PauliString::single('x', i, L), 1.0);
  }
  return ModelInstance{"chaotic_ising", std::move(h), std::move(dh),
                       {{"L", static_cast<double>(L)}, {"hx", hx}, {"hz", hz}},
                       std::int64_t{1} << L, chain_regulator(L),
                       static_cast<double>(L)};
}

ModelInstance make_xxz_open(ParamReader& reader) {
  const int L = chain_length(reader);
  const double delta = reader.required("delta");
  OperatorSum h = OperatorSum::sparse(L);
  OperatorSum dh = OperatorSum::sparse(L);
  for (int i = 0; i + 1 < L; ++i) {
    h.add_term(PauliString::two('x', i, 'x', i + 1, L), 1.0);
    h.add_term(PauliString::two('y', i, 'y', i + 1, L), 1.0);
    h.add_term(PauliString::two('z', i, 'z', i + 1, L), delta);
    dh.add_term(PauliString::two('z', i, 'z', i + 1, L), 1.0);
  }
  return ModelInstance{"xxz_open", std::move(h), std::move(dh),
                       {{"L", static_cast<double>(L)}, {"delta", delta}},
                       std::int64_t{1} << L, chain_regulator(L),
                       static_cast<double>(L)};
}

ModelInstance make_lmg(ParamReader& reader) {
  const double S = reader.required_spin("S");
  if (S < 1.0) {
    throw config_error("model 'lmg' requires S >= 1");
  }
  const double J = reader.required("J");
  const SpinOps spin = spin_matrices(S);
  const Eigen::MatrixXcd x_hat = spin.sx / S;
  const Eigen::MatrixXcd z_hat = spin.sz / S;
  const Eigen::MatrixXcd z2 = z_hat * z_hat;
  ModelInstance m{"lmg",
                  OperatorSum::from_matrix(x_hat + 2.0 * J * z2),
                  OperatorSum::from_matrix(z2),
                  {{"S", S}, {"J", J}},
                  static_cast<std::int64_t>(std::lround(2.0 * S)) + 1,
                  spin_regulator(S),
                  2.0 * S + 1.0};
  return m;
}

ModelInstance make_su2_ladder(ParamReader& reader) {
  const double S = reader.required_spin("S");
  const double alpha = reader.required("alpha");
  const SpinOps spin = spin_matrices(S);
  const Eigen::MatrixXcd ladder = 2.0 * spin.sx;  // J+ + J-
  return ModelInstance{"su2_ladder",
                       OperatorSum::from_matrix(alpha * ladder),
                       OperatorSum::from_matrix(ladder),
                       {{"S", S}, {"alpha", alpha}},
                       static_cast<std::int64_t>(std::lround(2.0 * S)) + 1,
                       spin_regulator(S),
                       2.0 * S + 1.0};
}

}  // namespace

ModelInstance build_model(const std::string& name,
                          const std::map<std::string, double>& params) {
  ParamReader reader(name, params);
  ModelInstance m;
  if (name == "two_level") {
    m = make_two_level(reader);
  } else if (name == "two_qubit") {
    m = make_two_qubit(reader);
  } else if (name == "four_body") {
    m = make_four_body(reader);
  } else if (name == "ising_periodic") {
    m = make_ising_periodic(reader);
  } else if (name == "chaotic_ising") {
    m = make_chaotic_ising(reader);
  } else if (name == "xxz_open") {
    m = make_xxz_open(reader);
  } else if (name == "lmg") {
    m = make_lmg(reader);
  } else if (name == "su2_ladder") {
    m = make_su2_ladder(reader);
  } else {
    throw config_error("unknown model '" + name + "'");
  }
  reader.reject_unknown();
  return m;
}

double default_regulator(const ModelInstance& m) { return m.default_mu; }

NormalizedDeformation normalized_deformation(const ModelInstance& m) {
  const double ip = std::real(inner_product(m.deformation, m.deformation));
  const double norm = std::sqrt(std::max(0.0, ip));
  if (norm <= 1e-14) {
    throw config_error("model '" + m.name +
                       "' has a zero deformation operator");
  }
  OperatorSum o0 = m.deformation;
  o0.scale(1.0 / norm);
  return NormalizedDeformation{std::move(o0), norm};
}

const std::vector<std::string>& known_models() {
  static const std::vector<std::string> names = {
      "two_level",      "two_qubit",     "four_body", "ising_periodic",
      "chaotic_ising",  "xxz_open",      "lmg",       "su2_ladder"};
  return names;
}

}  // namespace agpk
