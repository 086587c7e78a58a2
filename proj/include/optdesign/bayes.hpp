#pragma once

#include "optdesign/local.hpp"
#include "optdesign/prior.hpp"

namespace optdesign {

/// Log-tilted grid with the library defaults.
GridSpec default_bayes_grid();

/// Psi = sum_j w_j log det M(xi, beta_j) over the prior's quadrature; the
/// standardized form subtracts log det M(xi[beta_j], beta_j) at every node.
/// Returns kMinusInfinity when M is singular at some node. `local` supplies
/// the local designs for the standardized form (built on demand when null).
double bayes_criterion(const DesignMeasure& design, const ModelSpec& model,
                       const ParameterPrior& prior, bool standardized,
                       const LocalDesigns* local = nullptr);

struct BayesSolveOptions {
  bool certify = true;
  double certificate_tolerance = 1e-6;
  ExchangeOptions exchange{};
};

/// Bayesian D-optimal design on the discretized interval. criterion_value is
/// the unstandardized Psi.
DesignSolution solve_bayes(const ModelSpec& model, const ParameterPrior& prior,
                           const GridSpec& grid = default_bayes_grid(),
                           const BayesSolveOptions& options = {});

/// Averaged equivalence audit: sup_x sum_j w_j f^T M_j^{-1} f <= m (1 + tolerance).
EquivalenceCertificate bayes_certificate(const DesignMeasure& design, const ModelSpec& model,
                                         const ParameterPrior& prior, double tolerance = 1e-6);

/// sum_j w_j tr M^{-1}(xi, beta_j) / tr M^{-1}(xi[beta_j], beta_j); kPlusInfinity
/// when M(xi, beta_j) is singular at some node.
double bayes_a_criterion(const DesignMeasure& design, const ModelSpec& model,
                         const ParameterPrior& prior, const LocalDesigns* local = nullptr);

}  // namespace optdesign
