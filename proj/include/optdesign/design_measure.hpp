#pragma once

#include <span>
#include <vector>

namespace optdesign {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

/// Finitely supported probability measure on the design space.
///
/// Weights are nonnegative and sum to one within 1e-12; construction
/// validates this. Points need not be distinct; canonical_merge() produces
/// the distinct-support form used for reporting.
class DesignMeasure {
 public:
  DesignMeasure(std::vector<double> points, std::vector<double> weights);

  /// Rescales nonnegative weights to sum to one before validating.
  static DesignMeasure normalized(std::vector<double> points, std::vector<double> weights);
  static DesignMeasure point_mass(double x);
  /// Equal weights 1/n on the given points.
  static DesignMeasure uniform(std::vector<double> points);
  /// sum_i coeffs[i] * parts[i]; coeffs are renormalized.
  static DesignMeasure mixture(std::span<const DesignMeasure> parts, std::span<const double> coeffs);

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

  /// Copy with points sorted ascending (weights follow).
  DesignMeasure sorted() const;

  bool operator==(const DesignMeasure&) const = default;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Support identification: points within merge_radius of their neighbour are
/// merged at the weight-averaged location, weights below weight_floor are
/// dropped, and the rest renormalized. Throws DegenerateDesignError when no
/// weight survives.
DesignMeasure canonical_merge(const DesignMeasure& design, double merge_radius, double weight_floor);

/// Defaults for reporting: merge radius 1e-3 x interval length, floor 1e-3.
inline constexpr double kDefaultMergeRadiusFraction = 1e-3;
inline constexpr double kDefaultWeightFloor = 1e-3;
DesignMeasure canonical_merge(const DesignMeasure& design, const Interval& design_interval);

}  // namespace optdesign
