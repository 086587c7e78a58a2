#pragma once

#include <string>

#include "optdesign/model.hpp"

namespace optdesign::models {

/// eta = exp(-beta x) on [0, 1]; f = x exp(-beta x); local design: point mass at 1/beta.
ModelSpec exp1();
/// eta = alpha + exp(-beta x) on [0, 1]; f = (1, -x exp(-beta x));
/// local design: equal masses at {0, 1/beta}.
ModelSpec exp2();
/// eta = alpha1 + alpha2 exp(-beta x) on [0, 1] with alpha2 = 1;
/// f = (1, exp(-beta x), -x exp(-beta x)); local designs are numeric and share {0, 1}.
ModelSpec exp3();
/// Binary response with P(Y = 1) = 1 / (1 + exp(x - beta)) on [0, x_max];
/// I(x, beta) = exp(x - beta) / (1 + exp(x - beta))^2; local design: point mass at beta.
ModelSpec logistic(double x_max = 30.0);

/// Looks up exp1 | exp2 | exp3 | logistic; throws UsageError otherwise.
ModelSpec by_name(const std::string& name, double logistic_x_max = 30.0);

/// Signed bracket of the exp3 Gram determinant:
/// H = x1 e1 (e3 - e2) + x2 e2 (e1 - e3) + x3 e3 (e2 - e1), e_i = exp(-beta x_i).
double h_function(double x1, double x2, double x3, double beta);

}  // namespace optdesign::models

namespace optdesign {

struct QEfficiency {
  double value = 0.0;
  /// The numerator design is singular at beta (value is 0).
  bool singular = false;
};

/// Q(beta, beta_tilde) = det M(xi[beta_tilde], beta) / det M(xi[beta], beta).
/// Throws InternalError when the local design at beta is itself singular.
QEfficiency q_efficiency(const ModelSpec& model, double beta, double beta_tilde,
                         const LocalOracle& local);

}  // namespace optdesign
