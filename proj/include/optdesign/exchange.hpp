#pragma once

#include <optional>
#include <vector>

#include "optdesign/design_measure.hpp"
#include "optdesign/grid.hpp"
#include "optdesign/model.hpp"

namespace optdesign {

/// Parameter nodes over which log-determinants are aggregated. Every
/// criterion in the library has the form
///   F(xi) = A_j [ log det M(xi, beta_j) - offset_j ]
/// where A is either a weighted average (local, Bayesian) or a smoothed
/// minimum (maximin).
struct CriterionNodes {
  std::vector<double> betas;
  /// Prior weights (average) or base weights (soft minimum); sum to one.
  std::vector<double> weights;
  /// log det M(xi[beta_j], beta_j) for standardized criteria, zero otherwise.
  std::vector<double> offsets;

  static CriterionNodes single(double beta);
  std::size_t size() const { return betas.size(); }
};

enum class Aggregation { kAverage, kSoftMin };

struct ExchangeOptions {
  Aggregation aggregation = Aggregation::kAverage;
  /// Increasing temperatures for the soft minimum
  ///   F = -(1/tau) log sum_j q_j exp(-tau g_j);  ignored for averages.
  std::vector<double> tau_schedule{1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7};
  /// Converged when the largest directional derivative over the candidates is
  /// at most m (1 + tolerance).
  double tolerance = 1e-9;
  /// Tolerance for intermediate soft-minimum stages.
  double stage_tolerance = 1e-6;
  int max_iterations = 100000;
  int multiplicative_iterations = 100;
  int max_newton_iterations = 60;
};

struct ExchangeResult {
  /// Support with positive weight, sorted ascending.
  DesignMeasure design;
  double value = 0.0;
  /// Aggregation weights at the optimum (prior weights, or the soft-minimum
  /// weights of the final temperature).
  std::vector<double> node_weights;
  std::vector<double> node_values;
  double max_derivative = 0.0;
  int iterations = 0;
  /// Criterion value after every accepted step of the final temperature stage.
  std::vector<double> trace;
  bool converged = false;
};

/// Maximizes the aggregated log-determinant over designs supported on the
/// candidate grid, refining the grid around the support afterwards.
///
/// Phases: multiplicative updates w_k <- w_k d_k / m on the full grid (warm
/// start, skipped when a seed is given); vertex-exchange steps toward the
/// argmax of the directional derivative with an exact line search; Newton
/// steps on the support weights (points whose weights reach zero are
/// dropped); local grid refinement rounds per `grid`.
///
/// Throws InfeasibleError when no nonsingular design exists on the grid.
ExchangeResult optimize_design(const ModelSpec& model, const CriterionNodes& nodes,
                               const GridSpec& grid, const ExchangeOptions& options,
                               const std::optional<DesignMeasure>& seed = std::nullopt);

}  // namespace optdesign
