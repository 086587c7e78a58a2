#include "optdesign/design_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

constexpr double kWeightSumTolerance = 1e-12;

}  // namespace

DesignMeasure::DesignMeasure(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size()) {
    throw UsageError("design points and weights differ in length");
  }
  if (points_.empty()) throw UsageError("design has no support points");
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw UsageError("design point is not finite");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw UsageError("design weight is negative or not finite");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw UsageError("design weights sum to " + std::to_string(total) + ", expected 1");
  }
}

DesignMeasure DesignMeasure::normalized(std::vector<double> points, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw UsageError("design weight is negative or not finite");
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateDesignError("design has zero total weight");
  for (double& w : weights) w /= total;
  return DesignMeasure(std::move(points), std::move(weights));
}

DesignMeasure DesignMeasure::point_mass(double x) { return DesignMeasure({x}, {1.0}); }

DesignMeasure DesignMeasure::uniform(std::vector<double> points) {
  std::vector<double> weights(points.size(), 1.0 / static_cast<double>(points.size()));
  return normalized(std::move(points), std::move(weights));
}

DesignMeasure DesignMeasure::mixture(std::span<const DesignMeasure> parts,
                                     std::span<const double> coeffs) {
  if (parts.size() != coeffs.size() || parts.empty()) {
    throw UsageError("mixture needs one coefficient per component");
  }
  std::vector<double> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t k = 0; k < parts[i].size(); ++k) {
      points.push_back(parts[i].points()[k]);
      weights.push_back(coeffs[i] * parts[i].weights()[k]);
    }
  }
  return normalized(std::move(points), std::move(weights));
}

DesignMeasure DesignMeasure::sorted() const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
  std::vector<double> p;
  std::vector<double> w;
  for (std::size_t i : order) {
    p.push_back(points_[i]);
    w.push_back(weights_[i]);
  }
  return DesignMeasure(std::move(p), std::move(w));
}

DesignMeasure canonical_merge(const DesignMeasure& design, double merge_radius,
                              double weight_floor) {
  if (merge_radius < 0.0 || weight_floor < 0.0) {
    throw UsageError("merge radius and weight floor must be nonnegative");
  }
  const DesignMeasure s = design.sorted();

  // Greedy left-to-right clustering: a point joins the running cluster when it
  // lies within merge_radius of the cluster's current centroid.
  std::vector<double> points;
  std::vector<double> weights;
  double cx = 0.0;
  double cw = 0.0;
  double moment = 0.0;
  bool open = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s.points()[i];
    const double w = s.weights()[i];
    if (open && std::abs(x - cx) <= merge_radius) {
      cw += w;
      moment += w * x;
      cx = cw > 0.0 ? moment / cw : x;
      continue;
    }
    if (open) {
      points.push_back(cx);
      weights.push_back(cw);
    }
    cx = x;
    cw = w;
    moment = w * x;
    open = true;
  }
  if (open) {
    points.push_back(cx);
    weights.push_back(cw);
  }

  std::vector<double> kept_points;
  std::vector<double> kept_weights;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] >= weight_floor && weights[i] > 0.0) {
      kept_points.push_back(points[i]);
      kept_weights.push_back(weights[i]);
    }
  }
  if (kept_points.empty()) {
    throw DegenerateDesignError("every design weight fell below the support floor");
  }
  return DesignMeasure::normalized(std::move(kept_points), std::move(kept_weights));
}

DesignMeasure canonical_merge(const DesignMeasure& design, const Interval& design_interval) {
  return canonical_merge(design, kDefaultMergeRadiusFraction * design_interval.length(),
                         kDefaultWeightFloor);
}

}  // namespace optdesign
