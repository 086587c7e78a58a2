#pragma once

#include <vector>

#include "optdesign/local.hpp"

namespace optdesign {

struct MaximinValue {
  /// min_j det M(xi, beta_j) / det M(xi[beta_j], beta_j), in [0, 1].
  double value = 0.0;
  double argmin_beta = 0.0;
};

/// Efficiency det M(xi, beta) / det M(xi[beta], beta) at every grid value
/// (0 where M(xi, beta) is singular).
std::vector<double> efficiency_curve(const DesignMeasure& design, const BetaGrid& grid,
                                     const LocalDesigns& local);

/// Standardized maximin criterion over the grid; the smallest beta wins ties.
MaximinValue maximin_criterion(const DesignMeasure& design, const BetaGrid& grid,
                               const LocalDesigns& local);
MaximinValue maximin_criterion(const DesignMeasure& design, const ModelSpec& model,
                               const BetaGrid& grid);

struct MaximinSolveOptions {
  bool certify = true;
  double certificate_tolerance = 1e-5;
  /// beta belongs to the active set when its efficiency is at most min (1 + active_tolerance).
  double active_tolerance = 1e-5;
  /// Exponentiated-gradient iterations for the least-favorable measure.
  int measure_iterations = 1000;
  ExchangeOptions exchange = default_exchange();

  static ExchangeOptions default_exchange() {
    ExchangeOptions o;
    o.aggregation = Aggregation::kSoftMin;
    o.tolerance = 1e-7;
    return o;
  }
};

/// Least-favorable measure search and equivalence audit for a maximin
/// candidate: mu on the active set minimizing sup_x sum_j mu_j f^T M_j^{-1} f.
/// `start` gives initial weights per grid value (uniform on the active set when empty).
EquivalenceCertificate maximin_certificate(const DesignMeasure& design, const BetaGrid& grid,
                                           const LocalDesigns& local,
                                           const MaximinSolveOptions& options = {},
                                           const std::vector<double>& start = {});

/// Standardized maximin D-optimal design; criterion_value is Phi.
DesignSolution solve_maximin(const ModelSpec& model, const BetaGrid& grid,
                             const GridSpec& xgrid = {}, const MaximinSolveOptions& options = {});
/// Variant sharing a cache of local designs.
DesignSolution solve_maximin(const LocalDesigns& local, const BetaGrid& grid,
                             const GridSpec& xgrid = {}, const MaximinSolveOptions& options = {});

/// Support size after the default canonical merge.
int support_count(const DesignMeasure& design, const Interval& design_interval);

}  // namespace optdesign
