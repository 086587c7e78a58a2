#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "optdesign/design_measure.hpp"

namespace optdesign::testing {

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline DesignMeasure random_design(std::mt19937_64& rng, int n, const Interval& interval) {
  std::uniform_real_distribution<double> ux(interval.lo, interval.hi);
  std::uniform_real_distribution<double> uw(0.05, 1.0);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = ux(rng);
    w[i] = uw(rng);
  }
  return DesignMeasure::normalized(x, w);
}

}  // namespace optdesign::testing
