#pragma once

#include <string>
#include <vector>

#include "optdesign/scale.hpp"

namespace optdesign {

struct QuadratureNode {
  double beta;
  double weight;
};

/// Probability distribution of the nonlinear parameter.
class ParameterPrior {
 public:
  enum class Kind { kUniform, kTruncExp, kDiscreteUniform, kPointMass };

  /// Uniform on [lo, hi]; Gauss-Legendre quadrature with `nodes` points.
  static ParameterPrior uniform(double lo, double hi, int nodes = 200);
  /// Density c a exp(-a beta) on [0, 1/a), c = 1/(1 - e^-1), 0 < a < 1.
  /// Composite Gauss-Legendre with `nodes` points (20 per panel).
  static ParameterPrior trunc_exp(double a, int nodes = 400);
  /// Equal atoms on {1, ..., L}.
  static ParameterPrior discrete_uniform(int count);
  static ParameterPrior point_mass(double beta);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double rate() const { return rate_; }
  int count() const { return count_; }
  int quadrature_nodes() const { return nodes_; }

  /// Nodes in increasing beta, positive weights summing to one.
  std::vector<QuadratureNode> quadrature() const;
  /// Prior probability of [lo, hi].
  double mass(double lo, double hi) const;
  /// Scale under which the prior is uniform (identity for point masses).
  ScaleFunction natural_scale() const;
  /// uniform:LO:HI | truncexp:A | discrete:L | point:B
  std::string describe() const;
  /// Parses the `describe` format; throws UsageError.
  static ParameterPrior parse(const std::string& text, int nodes = 0);

 private:
  ParameterPrior(Kind kind, double lo, double hi, double rate, int count, int nodes);

  Kind kind_;
  double lo_;
  double hi_;
  double rate_;
  int count_;
  int nodes_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace optdesign
