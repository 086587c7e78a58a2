#include "optdesign/design.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

void require_in_interval(const DesignMeasure& design, const ModelSpec& model) {
  for (double x : design.points()) {
    if (!model.design_interval.contains(x)) {
      throw DomainError("design point " + std::to_string(x) + " outside the design interval of " +
                        model.name);
    }
  }
}

}  // namespace

InfoMatrix information_matrix(const DesignMeasure& design, const ModelSpec& model, double beta) {
  model.require_admissible(beta);
  require_in_interval(design, model);
  InfoMatrix info(model.m);
  for (std::size_t k = 0; k < design.size(); ++k) {
    const auto f = model.score_at(design.points()[k], beta);
    info.add_outer(design.weights()[k], std::span<const double>(f.data(), model.m));
  }
  return info;
}

double log_det_information(const DesignMeasure& design, const ModelSpec& model, double beta) {
  model.require_admissible(beta);
  require_in_interval(design, model);
  const int m = model.m;
  const std::size_t n = design.size();
  if (n < static_cast<std::size_t>(m)) return kMinusInfinity;
  std::vector<std::array<double, kMaxDim>> a(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto f = model.score_at(design.points()[k], beta);
    const double s = std::sqrt(design.weights()[k]);
    for (int c = 0; c < m; ++c) a[k][c] = s * f[c];
  }
  double log_scale = 0.0;
  double log_hadamard = 0.0;
  for (int c = 0; c < m; ++c) {
    double big = 0.0;
    for (const auto& row : a) big = std::max(big, std::abs(row[c]));
    if (!(big > 0.0)) return kMinusInfinity;
    double norm2 = 0.0;
    for (auto& row : a) {
      row[c] /= big;
      norm2 += row[c] * row[c];
    }
    log_scale += 2.0 * std::log(big);
    log_hadamard += std::log(norm2);
  }
  double log_r = 0.0;
  for (int c = 0; c < m; ++c) {
    double norm2 = 0.0;
    for (std::size_t k = c; k < n; ++k) norm2 += a[k][c] * a[k][c];
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0)) return kMinusInfinity;
    const double alpha = a[c][c] > 0.0 ? -norm : norm;
    a[c][c] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t k = c; k < n; ++k) vnorm2 += a[k][c] * a[k][c];
    for (int j = c + 1; j < m; ++j) {
      double dot = 0.0;
      for (std::size_t k = c; k < n; ++k) dot += a[k][c] * a[k][j];
      const double t = 2.0 * dot / vnorm2;
      for (std::size_t k = c; k < n; ++k) a[k][j] -= t * a[k][c];
    }
    log_r += 2.0 * std::log(norm);
  }
  if (log_r - log_hadamard < std::log(1e-12)) return kMinusInfinity;
  return log_scale + log_r;
}

double gram_determinant(std::span<const double> points, const ModelSpec& model, double beta) {
  if (static_cast<int>(points.size()) != model.m) {
    throw UsageError("gram_determinant needs exactly m = " + std::to_string(model.m) +
                     " points, got " + std::to_string(points.size()));
  }
  model.require_admissible(beta);
  std::vector<std::array<double, kMaxDim>> columns;
  columns.reserve(points.size());
  for (double x : points) columns.push_back(model.score_at(x, beta));
  const double det = column_determinant(columns, model.m);
  return det * det;
}

double det_via_cauchy_binet(const DesignMeasure& design, const ModelSpec& model, double beta) {
  model.require_admissible(beta);
  require_in_interval(design, model);
  const int m = model.m;
  const int n = static_cast<int>(design.size());
  if (n < m) return 0.0;

  std::vector<std::array<double, kMaxDim>> scores;
  scores.reserve(n);
  for (double x : design.points()) scores.push_back(model.score_at(x, beta));

  // Enumerate index tuples i_0 < ... < i_{m-1} in lexicographic order.
  std::array<int, kMaxDim> idx{};
  for (int r = 0; r < m; ++r) idx[r] = r;
  double total = 0.0;
  std::array<std::array<double, kMaxDim>, kMaxDim> cols{};
  while (true) {
    double weight = 1.0;
    for (int r = 0; r < m; ++r) {
      cols[r] = scores[idx[r]];
      weight *= design.weights()[idx[r]];
    }
    const double det = column_determinant(std::span(cols.data(), m), m);
    total += weight * det * det;

    int r = m - 1;
    while (r >= 0 && idx[r] == n - m + r) --r;
    if (r < 0) break;
    ++idx[r];
    for (int s = r + 1; s < m; ++s) idx[s] = idx[s - 1] + 1;
  }
  return total;
}

}  // namespace optdesign
