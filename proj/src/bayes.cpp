#include "optdesign/bayes.hpp"

#include <memory>

#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

const LocalDesigns& ensure_local(const ModelSpec& model, const LocalDesigns* local,
                                 std::unique_ptr<LocalDesigns>& owned) {
  if (local) return *local;
  owned = std::make_unique<LocalDesigns>(model);
  return *owned;
}

std::vector<double> node_betas(const std::vector<QuadratureNode>& nodes) {
  std::vector<double> b;
  b.reserve(nodes.size());
  for (const auto& q : nodes) b.push_back(q.beta);
  return b;
}

std::vector<double> node_weights(const std::vector<QuadratureNode>& nodes) {
  std::vector<double> w;
  w.reserve(nodes.size());
  for (const auto& q : nodes) w.push_back(q.weight);
  return w;
}

}  // namespace

GridSpec default_bayes_grid() {
  GridSpec grid;
  grid.spacing = Spacing::kLogTilted;
  return grid;
}

double bayes_criterion(const DesignMeasure& design, const ModelSpec& model,
                       const ParameterPrior& prior, bool standardized,
                       const LocalDesigns* local) {
  const auto nodes = prior.quadrature();
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns* designs = nullptr;
  if (standardized) {
    designs = &ensure_local(model, local, owned);
    const auto betas = node_betas(nodes);
    designs->prefetch(betas);
  }
  double total = 0.0;
  for (const auto& q : nodes) {
    const double ld = log_det(information_matrix(design, model, q.beta));
    if (ld == kMinusInfinity) return kMinusInfinity;
    total += q.weight * (standardized ? ld - designs->log_det(q.beta) : ld);
  }
  return total;
}

EquivalenceCertificate bayes_certificate(const DesignMeasure& design, const ModelSpec& model,
                                         const ParameterPrior& prior, double tolerance) {
  const auto nodes = prior.quadrature();
  const AveragedDerivative derivative(design, model, node_betas(nodes), node_weights(nodes));
  return audit_certificate(derivative, design, tolerance);
}

DesignSolution solve_bayes(const ModelSpec& model, const ParameterPrior& prior,
                           const GridSpec& grid, const BayesSolveOptions& options) {
  model.validate();
  const auto nodes = prior.quadrature();
  CriterionNodes criterion{node_betas(nodes), node_weights(nodes),
                           std::vector<double>(nodes.size(), 0.0)};
  ExchangeOptions exchange = options.exchange;
  exchange.aggregation = Aggregation::kAverage;
  const ExchangeResult raw = optimize_design(model, criterion, grid, exchange);

  DesignSolution solution = solution_from(raw, model.design_interval);
  if (bayes_criterion(solution.design, model, prior, false) == kMinusInfinity) {
    throw InfeasibleError(model.name + ": grid too coarse for a nonsingular Bayesian design");
  }
  if (options.certify) {
    select_certified_design(solution, model.design_interval, [&](const DesignMeasure& d) {
      return bayes_certificate(d, model, prior, options.certificate_tolerance);
    });
  }
  solution.criterion_value = bayes_criterion(solution.design, model, prior, false);
  return solution;
}

double bayes_a_criterion(const DesignMeasure& design, const ModelSpec& model,
                         const ParameterPrior& prior, const LocalDesigns* local) {
  const auto nodes = prior.quadrature();
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns& designs = ensure_local(model, local, owned);
  const auto betas = node_betas(nodes);
  designs.prefetch(betas);
  double total = 0.0;
  for (const auto& q : nodes) {
    const auto inv = information_matrix(design, model, q.beta).inverse();
    if (!inv) return kPlusInfinity;
    const auto ref = information_matrix(designs.design(q.beta), model, q.beta).inverse();
    if (!ref) throw InternalError(model.name + ": local design is singular");
    total += q.weight * inv->trace() / ref->trace();
  }
  return total;
}

}  // namespace optdesign
