#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "optdesign/design_measure.hpp"
#include "optdesign/linalg.hpp"
#include "optdesign/model.hpp"

namespace optdesign {

/// Directional-derivative audit of a candidate design.
///
/// passed <=> max_directional_derivative <= bound * (1 + tolerance), where the
/// bound is the parameter dimension m.
struct EquivalenceCertificate {
  double max_directional_derivative = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  double worst_point = 0.0;
  bool passed = false;
  /// (beta, weight) pairs of the least-favorable measure; maximin only.
  std::vector<std::pair<double, double>> least_favorable_weights;
};

/// D(x) = sum_j nu_j f(x, beta_j)^T M^{-1}(xi, beta_j) f(x, beta_j).
class AveragedDerivative {
 public:
  /// Throws SingularityError when M(xi, beta_j) is singular at a node with nu_j > 0.
  AveragedDerivative(const DesignMeasure& design, const ModelSpec& model,
                     std::vector<double> betas, std::vector<double> weights);

  double operator()(double x) const;
  /// Per-node terms f^T M_j^{-1} f at x.
  double node_term(std::size_t j, double x) const;
  std::size_t nodes() const { return betas_.size(); }
  const ModelSpec& model() const { return model_; }

 private:
  const ModelSpec& model_;
  std::vector<double> betas_;
  std::vector<double> weights_;
  std::vector<InfoMatrix> inverses_;
};

/// Audits sup_x D(x) over a dense grid (uniform and log-tilted, plus the
/// design's own points), refining the largest local maxima by golden-section
/// search between neighbouring grid points.
EquivalenceCertificate audit_certificate(const AveragedDerivative& derivative,
                                         const DesignMeasure& design, double tolerance,
                                         int audit_count = 10001);

/// Golden-section refinement of the maximum of `fn` on [lo, hi].
std::pair<double, double> golden_maximum(const std::function<double(double)>& fn, double lo,
                                         double hi, int iterations = 80);

}  // namespace optdesign
