#include "gauss.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <map>
#include <mutex>

#include "fkp/error.hpp"

namespace fkp::detail {

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  if (order < 1 || order > 128) throw InvalidArgument("Gauss-Legendre order must be in [1, 128]");

  // legendre_p_zeros returns the non-negative roots in ascending order.
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(order);
  GaussRule r;
  for (double z : pos) {
    const double dp = boost::math::legendre_p_prime(order, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x.push_back(z);
    r.w.push_back(w);
    if (z != 0.0) {
      r.x.push_back(-z);
      r.w.push_back(w);
    }
  }
  std::vector<std::size_t> idx(r.x.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return r.x[a] < r.x[b]; });
  GaussRule sorted;
  for (auto k : idx) {
    sorted.x.push_back(r.x[k]);
    sorted.w.push_back(r.w[k]);
  }
  return cache.emplace(order, std::move(sorted)).first->second;
}

}  // namespace fkp::detail
