#pragma once

#include <span>

#include "optdesign/design_measure.hpp"
#include "optdesign/linalg.hpp"
#include "optdesign/model.hpp"

namespace optdesign {

/// M(xi, beta) = sum_k w_k f(x_k, beta) f(x_k, beta)^T.
/// Throws DomainError for inadmissible beta or points outside the design interval.
InfoMatrix information_matrix(const DesignMeasure& design, const ModelSpec& model, double beta);

/// log det M(xi, beta) from a Householder QR of the weighted score matrix
/// [sqrt(w_k) f(x_k, beta)^T]_k with columns scaled to unit max norm, so that
/// tiny scores are never squared. Same singularity rule as log_det(InfoMatrix);
/// kMinusInfinity when singular.
double log_det_information(const DesignMeasure& design, const ModelSpec& model, double beta);

/// Squared determinant of the m x m matrix [f(x_1, beta) ... f(x_m, beta)].
/// Throws UsageError unless exactly m points are given.
double gram_determinant(std::span<const double> points, const ModelSpec& model, double beta);

/// det M(xi, beta) expanded over m-subsets of the support (Cauchy-Binet):
/// sum over i_1 < ... < i_m of w_{i_1} ... w_{i_m} I_m(x_{i_1}, ..., x_{i_m}, beta).
double det_via_cauchy_binet(const DesignMeasure& design, const ModelSpec& model, double beta);

}  // namespace optdesign
