#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "optdesign/design_measure.hpp"
#include "optdesign/linalg.hpp"

namespace optdesign {

/// Admissible values of the nonlinear parameter; the lower end may be open.
struct ParameterRange {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;

  bool contains(double beta) const {
    if (!std::isfinite(beta)) return false;
    return (lo_open ? beta > lo : beta >= lo) && beta <= hi;
  }
};

/// Score vector f(x, beta) with I(x, beta) = f f^T; writes m entries.
using ScoreFn = std::function<void(double x, double beta, std::span<double> out)>;
using LocalOracle = std::function<DesignMeasure(double beta)>;

/// A regression model whose Fisher information depends on a single nonlinear
/// parameter beta.
struct ModelSpec {
  std::string name;
  int m = 1;
  /// Number of support points shared by every local D-optimal design.
  int m_eta = 0;
  Interval design_interval{0.0, 1.0};
  ParameterRange beta_range;
  ScoreFn score;
  /// Closed-form local D-optimal design; empty when only numeric.
  LocalOracle analytic_local;
  std::vector<double> fixed_support;
  /// For x off the fixed support, a beta whose local design carries x; empty when unknown.
  std::function<double(double)> support_inverse;

  /// Checks 0 <= m_eta < m, fixed_support size and placement.
  void validate() const;
  void require_admissible(double beta) const;
  std::array<double, kMaxDim> score_at(double x, double beta) const;
};

}  // namespace optdesign
