#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace pgbandit::testing {

// Random point in the open simplex (normalized exponentials).
inline std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) {
    v = expo(gen) + 1e-3;
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(gen);
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pgbandit::testing
