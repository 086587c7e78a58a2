#include "optdesign/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

std::vector<double> uniform_points(const Interval& interval, int count) {
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i) {
    xs[i] = interval.lo + interval.length() * static_cast<double>(i) / (count - 1);
  }
  xs.back() = interval.hi;
  return xs;
}

std::vector<double> geometric_points(const Interval& interval, int count) {
  const double start = interval.length() * 1e-6;
  const double ratio = std::log(interval.length() / start);
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i) {
    xs[i] = interval.lo + start * std::exp(ratio * static_cast<double>(i) / (count - 1));
  }
  xs.back() = interval.hi;
  return xs;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

void GridSpec::validate(int m) const {
  if (count < m + 1 || count < 2) {
    throw UsageError("grid needs at least m + 1 = " + std::to_string(m + 1) + " points");
  }
  if (refinement_rounds < 0) throw UsageError("refinement rounds must be nonnegative");
  if (refinement_rounds > 0 && !(refinement_radius > 0.0)) {
    throw UsageError("refinement radius must be positive");
  }
  if (refinement_rounds > 0 && !(refinement_factor > 1.0)) {
    throw UsageError("refinement factor must exceed 1");
  }
}

std::vector<double> GridSpec::points(const Interval& interval) const {
  std::vector<double> xs = uniform_points(interval, count);
  if (spacing == Spacing::kLogTilted) {
    const auto geo = geometric_points(interval, count);
    xs.insert(xs.end(), geo.begin(), geo.end());
  }
  return sorted_unique(std::move(xs));
}

std::vector<double> audit_grid(const Interval& interval, int count) {
  std::vector<double> xs = uniform_points(interval, count);
  const auto geo = geometric_points(interval, count);
  xs.insert(xs.end(), geo.begin(), geo.end());
  return sorted_unique(std::move(xs));
}

BetaGrid::BetaGrid(double beta_min, double beta_max, int count, Kind spacing) : kind_(spacing) {
  if (!(beta_min < beta_max)) throw UsageError("beta grid needs beta_min < beta_max");
  if (count < 2) throw UsageError("beta grid needs at least 2 points");
  if (spacing == Kind::kExplicit) throw UsageError("use BetaGrid::from_values for explicit grids");
  if (spacing == Kind::kLog && !(beta_min > 0.0)) {
    throw UsageError("log-spaced beta grid needs beta_min > 0");
  }
  values_.resize(count);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    values_[i] = spacing == Kind::kLog
                     ? std::exp(std::log(beta_min) + t * (std::log(beta_max) - std::log(beta_min)))
                     : beta_min + t * (beta_max - beta_min);
  }
  values_.front() = beta_min;
  values_.back() = beta_max;
}

BetaGrid BetaGrid::from_values(std::vector<double> values) {
  if (values.empty()) throw UsageError("beta grid needs at least one value");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  BetaGrid grid;
  grid.kind_ = Kind::kExplicit;
  grid.values_ = std::move(values);
  return grid;
}

}  // namespace optdesign
