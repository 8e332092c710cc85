#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Core>

#include "smpc/plant.hpp"

namespace smpc::test {

inline constexpr int kPropertyCases = 1000;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int level(std::mt19937_64& g) { return std::uniform_int_distribution<int>(-1, 1)(g); }

inline SwitchState random_switch(std::mt19937_64& g) {
  return SwitchState(level(g), level(g), level(g));
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace smpc::test
