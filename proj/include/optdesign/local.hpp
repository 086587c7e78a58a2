#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "optdesign/certificate.hpp"
#include "optdesign/exchange.hpp"
#include "optdesign/grid.hpp"
#include "optdesign/model.hpp"

namespace optdesign {

/// Output of every solver.
struct DesignSolution {
  /// Optimal design with grid-adjacent splits merged (radius 1e-5 x interval length).
  DesignMeasure design;
  EquivalenceCertificate certificate;
  /// Local: det M(xi, beta). Bayesian: the (standardized) criterion. Maximin: Phi.
  double criterion_value = 0.0;
  /// Support exactly as returned by the grid optimizer.
  DesignMeasure raw_design;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

/// Support merge used on solver output before certification.
DesignMeasure merge_solver_output(const DesignMeasure& raw, const Interval& design_interval);

/// Replaces solution.design by its default canonical merge when that design
/// passes `certify`; otherwise keeps the finer merge. Sets the certificate.
void select_certified_design(
    DesignSolution& solution, const Interval& design_interval,
    const std::function<EquivalenceCertificate(const DesignMeasure&)>& certify);

/// Merged design plus trace and iteration data of an optimizer run; the
/// certificate and criterion value are left for the caller.
DesignSolution solution_from(const ExchangeResult& raw, const Interval& design_interval);

struct LocalSolveOptions {
  /// Seed the optimizer with the closed-form local design when the model has one.
  bool seed_with_analytic = true;
  bool certify = true;
  double certificate_tolerance = 1e-6;
  ExchangeOptions exchange{};
};

/// Local D-optimal design for fixed beta on the discretized design interval.
/// Throws DomainError for inadmissible beta, InfeasibleError for a grid that
/// carries no nonsingular design.
DesignSolution solve_local(const ModelSpec& model, double beta, const GridSpec& grid = {},
                           const LocalSolveOptions& options = {});

/// trace(M^{-1}(xi, beta) I(x, beta)); throws SingularityError for singular M.
double directional_derivative(const DesignMeasure& design, const ModelSpec& model, double beta,
                              double x);

/// Thread-safe cache of local D-optimal designs xi[beta] and log det M(xi[beta], beta):
/// closed form when the model provides one, otherwise solve_local.
class LocalDesigns {
 public:
  explicit LocalDesigns(ModelSpec model, GridSpec grid = {});
  LocalDesigns(const LocalDesigns&) = delete;
  LocalDesigns& operator=(const LocalDesigns&) = delete;

  const ModelSpec& model() const { return model_; }
  DesignMeasure design(double beta) const;
  double log_det(double beta) const;
  /// Fills the cache for all betas, in parallel.
  void prefetch(std::span<const double> betas) const;
  /// Callable view; the LocalDesigns object must outlive it.
  LocalOracle oracle() const;

 private:
  struct Entry {
    DesignMeasure design;
    double log_det;
  };
  Entry compute(double beta) const;
  const Entry& entry(double beta) const;

  ModelSpec model_;
  GridSpec grid_;
  mutable std::mutex mutex_;
  mutable std::map<double, Entry> cache_;
};

}  // namespace optdesign
