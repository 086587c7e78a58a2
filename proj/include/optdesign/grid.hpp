#pragma once

#include <vector>

#include "optdesign/design_measure.hpp"

namespace optdesign {

enum class Spacing { kUniform, kLogTilted };

/// Discretization of the design interval used by the solvers.
///
/// The log-tilted grid is the union of `count` uniform points and `count`
/// geometrically spaced points between lo + 1e-6 * length and hi, so that
/// resolution near the lower end grows with the tilt.
struct GridSpec {
  int count = 2001;
  Spacing spacing = Spacing::kUniform;
  int refinement_rounds = 5;
  /// Half-width of each refinement window, in multiples of the pre-refinement
  /// local spacing around a support point.
  double refinement_radius = 3.0;
  /// Spacing shrink factor per refinement round.
  double refinement_factor = 10.0;

  /// Throws UsageError unless count >= m + 1 and radius > 0 when rounds > 0.
  void validate(int m) const;
  std::vector<double> points(const Interval& interval) const;
};

/// Dense audit grid for certificates: uniform and log-tilted points merged.
std::vector<double> audit_grid(const Interval& interval, int count = 10001);

/// Finite grid of parameter values.
class BetaGrid {
 public:
  enum class Kind { kLog, kUniform, kExplicit };

  /// Throws UsageError unless beta_min < beta_max and count >= 2 (log needs beta_min > 0).
  BetaGrid(double beta_min, double beta_max, int count, Kind spacing = Kind::kLog);
  /// Arbitrary sorted values; a singleton is allowed.
  static BetaGrid from_values(std::vector<double> values);

  double beta_min() const { return values_.front(); }
  double beta_max() const { return values_.back(); }
  int count() const { return static_cast<int>(values_.size()); }
  Kind spacing() const { return kind_; }
  const std::vector<double>& values() const { return values_; }

 private:
  BetaGrid() = default;
  Kind kind_ = Kind::kExplicit;
  std::vector<double> values_;
};

}  // namespace optdesign
