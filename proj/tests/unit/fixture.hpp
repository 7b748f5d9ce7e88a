#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace agpk_test {

/// Reference values computed with mpmath (40-digit precision) plus an
/// independent dense numpy implementation of the models; loaded once.
inline const nlohmann::json& fx() {
  static const nlohmann::json j = [] {
    const std::string path = std::string(AGPK_FIXTURE_DIR) + "/reference_values.json";
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open fixture file: " + path);
    return nlohmann::json::parse(f);
  }();
  return j;
}

/// |got - want| <= rtol*|want| + atol, with a diagnostic on failure.
inline void check_near(double got, double want, double rtol, double atol = 0.0) {
  const double tol = rtol * std::fabs(want) + atol;
  INFO("got " << got << ", want " << want << ", |diff| " << std::fabs(got - want)
              << ", tol " << tol);
  CHECK(std::fabs(got - want) <= tol);
}

inline std::vector<double> to_vec(const nlohmann::json& a) {
  return a.get<std::vector<double>>();
}

}  // namespace agpk_test
