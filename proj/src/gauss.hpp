#pragma once

#include <vector>

namespace fkp::detail {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached per order; safe to call concurrently.
const GaussRule& gauss_legendre(int order);

}  // namespace fkp::detail
