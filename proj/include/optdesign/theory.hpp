#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optdesign/local.hpp"
#include "optdesign/prior.hpp"
#include "optdesign/scale.hpp"

namespace optdesign {

/// Upper envelope phi of the efficiency as a function of z = l(beta) - l(beta~).
struct DecayEnvelope {
  enum class Form { kPower, kExponential };
  Form form = Form::kExponential;
  double c1 = 1.0;
  double gamma = 1.0;

  /// c1 |z|^-gamma (infinite at z = 0).
  static DecayEnvelope power(double c1, double gamma);
  /// c1 exp(-gamma |z|).
  static DecayEnvelope exponential(double c1, double gamma);

  double operator()(double z) const;
  /// Power envelopes need gamma > m - m_eta to drive support growth of maximin designs.
  bool admissible_for_maximin(const ModelSpec& model) const;
  std::string describe() const;
};

struct TheoryReport {
  std::string check;
  std::string domain;
  long long samples = 0;
  long long violations = 0;
  /// Largest amount by which a checked inequality is violated (negative: slack).
  double worst_margin = 0.0;
  /// Largest lambda such that Q >= 1/2 whenever |l(beta) - l(beta~)| <= lambda (sampled).
  std::optional<double> lambda_estimate;
  /// Named constants and bound values (c0, c3, B, n, ...).
  std::vector<std::pair<std::string, double>> quantities;
  bool passed = false;

  std::optional<double> quantity(const std::string& name) const;
};

/// Q(beta, beta~) <= phi(l(beta) - l(beta~)) on all ordered sample pairs whose
/// distance is at least `min_distance`, plus the lambda estimate.
TheoryReport check_uniform_decrease(const ModelSpec& model, const ScaleFunction& scale,
                                    const DecayEnvelope& envelope,
                                    const std::vector<double>& beta_samples,
                                    double min_distance = 0.0,
                                    const LocalDesigns* local = nullptr);

/// Domination of m-point Gram determinants by local designs: for every
/// sorted tuple of x samples and every beta in the grid,
///   I_m(x_1..x_m, beta) <= c0_gram sum_k I_m(anchor_k, beta),
///   I_m(x_1..x_m, beta) <= c0 sum_k det M(xi[beta~_k], beta),
/// where anchor_k is the common support plus x_k and beta~_k is the parameter
/// whose local design carries x_k (clamped to the grid range, or the nearest
/// grid value when no inverse is known). Reports c0_gram and c0; passes when
/// c0_gram <= 1 and c0 is finite.
TheoryReport check_gram_domination(const ModelSpec& model, const std::vector<double>& x_samples,
                                 const BetaGrid& beta_grid, const LocalDesigns* local = nullptr);

/// pi(A) >= c3 |l(A)| / l(range) over all intervals A spanned by the samples.
TheoryReport check_prior_domination(const ParameterPrior& prior, const ScaleFunction& scale,
                                    const std::vector<double>& beta_samples);

struct LowerBoundDesign {
  DesignMeasure design;
  int n = 0;
  /// l(beta_max) - l(beta_min).
  double width = 0.0;
  std::vector<double> betas;
};

/// Uniform mixture of the local designs at l(beta_k) = l(beta_min) + (2k - 1) B / (2n),
/// n = ceil(B / (2 lambda)). Shared support points are merged. Throws UsageError
/// unless B >= 4 lambda.
LowerBoundDesign construct_lower_bound_design(const ModelSpec& model, const ScaleFunction& scale,
                                              double beta_min, double beta_max, double lambda,
                                              const LocalDesigns* local = nullptr);

/// Efficiency bounds for the constructed design on a grid uniform in l:
/// pointwise efficiency >= 1 / (2 n^(m - m_eta)); Phi >= lambda / (2B) when m = 1;
/// standardized Bayesian value under `prior` (uniform on the range by default)
/// >= -log B + log lambda.
TheoryReport verify_lower_bounds(const ModelSpec& model, const ScaleFunction& scale,
                                 double beta_min, double beta_max, double lambda,
                                 std::optional<ParameterPrior> prior = std::nullopt,
                                 int grid_count = 1000, const LocalDesigns* local = nullptr);

enum class GrowthCriterion { kMaximin, kBayesUniform };

struct GrowthRow {
  double B = 0.0;
  int support_count = 0;
  double criterion_value = 0.0;
  bool certificate_passed = false;
  std::optional<DesignMeasure> design;
  std::string error;
};

struct GrowthOptions {
  int beta_grid_count = 400;
  int quadrature_nodes = 200;
};

/// Solves on [1, B] for every B (ascending) and records the support size.
/// Solver failures are recorded in the row and do not stop the study.
std::vector<GrowthRow> growth_study(const ModelSpec& model, GrowthCriterion criterion,
                                    const std::vector<double>& B_list,
                                    const GrowthOptions& options = {});

/// Standardized Bayesian value of the best one-point design on the audit grid.
double best_one_point_bayes(const ModelSpec& model, const ParameterPrior& prior,
                            const LocalDesigns* local = nullptr);

}  // namespace optdesign
