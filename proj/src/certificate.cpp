#include "optdesign/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/grid.hpp"
#include "optdesign/parallel.hpp"

namespace optdesign {

AveragedDerivative::AveragedDerivative(const DesignMeasure& design, const ModelSpec& model,
                                       std::vector<double> betas, std::vector<double> weights)
    : model_(model), betas_(std::move(betas)), weights_(std::move(weights)) {
  if (betas_.size() != weights_.size()) throw UsageError("node weights do not match nodes");
  inverses_.reserve(betas_.size());
  for (std::size_t j = 0; j < betas_.size(); ++j) {
    auto inv = information_matrix(design, model, betas_[j]).inverse();
    if (!inv) {
      if (weights_[j] > 0.0) {
        throw SingularityError("information matrix is singular at beta = " +
                               std::to_string(betas_[j]));
      }
      inverses_.emplace_back(model.m);
      continue;
    }
    inverses_.push_back(*inv);
  }
}

double AveragedDerivative::node_term(std::size_t j, double x) const {
  const auto f = model_.score_at(x, betas_[j]);
  return inverses_[j].quadratic(std::span<const double>(f.data(), model_.m));
}

double AveragedDerivative::operator()(double x) const {
  double d = 0.0;
  for (std::size_t j = 0; j < betas_.size(); ++j) {
    if (weights_[j] == 0.0) continue;
    d += weights_[j] * node_term(j, x);
  }
  return d;
}

std::pair<double, double> golden_maximum(const std::function<double(double)>& fn, double lo,
                                         double hi, int iterations) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = fn(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

EquivalenceCertificate audit_certificate(const AveragedDerivative& derivative,
                                         const DesignMeasure& design, double tolerance,
                                         int audit_count) {
  const ModelSpec& model = derivative.model();
  std::vector<double> xs = audit_grid(model.design_interval, audit_count);
  xs.insert(xs.end(), design.points().begin(), design.points().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> values(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { values[i] = derivative(xs[i]); });

  EquivalenceCertificate cert;
  cert.bound = model.m;
  cert.tolerance = tolerance;
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  cert.max_directional_derivative = values[best];
  cert.worst_point = xs[best];

  // Interior local maxima, largest first.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (values[i] >= values[i - 1] && values[i] >= values[i + 1]) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > 12) peaks.resize(12);
  const std::function<double(double)> fn = [&](double x) { return derivative(x); };
  for (std::size_t i : peaks) {
    const auto [x, v] = golden_maximum(fn, xs[i - 1], xs[i + 1]);
    if (v > cert.max_directional_derivative) {
      cert.max_directional_derivative = v;
      cert.worst_point = x;
    }
  }
  cert.passed = cert.max_directional_derivative <= cert.bound * (1.0 + tolerance);
  return cert;
}

}  // namespace optdesign
