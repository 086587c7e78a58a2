#include "optdesign/maximin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/parallel.hpp"

namespace optdesign {

std::vector<double> efficiency_curve(const DesignMeasure& design, const BetaGrid& grid,
                                     const LocalDesigns& local) {
  const auto& betas = grid.values();
  local.prefetch(betas);
  std::vector<double> eff(betas.size());
  parallel_for(betas.size(), [&](std::size_t j) {
    const double ld = log_det(information_matrix(design, local.model(), betas[j]));
    eff[j] = ld == kMinusInfinity ? 0.0 : std::exp(ld - local.log_det(betas[j]));
  });
  return eff;
}

MaximinValue maximin_criterion(const DesignMeasure& design, const BetaGrid& grid,
                               const LocalDesigns& local) {
  const auto eff = efficiency_curve(design, grid, local);
  const auto it = std::min_element(eff.begin(), eff.end());
  return {*it, grid.values()[static_cast<std::size_t>(it - eff.begin())]};
}

MaximinValue maximin_criterion(const DesignMeasure& design, const ModelSpec& model,
                               const BetaGrid& grid) {
  const LocalDesigns local(model);
  return maximin_criterion(design, grid, local);
}

EquivalenceCertificate maximin_certificate(const DesignMeasure& design, const BetaGrid& grid,
                                           const LocalDesigns& local,
                                           const MaximinSolveOptions& options,
                                           const std::vector<double>& start) {
  const ModelSpec& model = local.model();
  const auto& betas = grid.values();
  const auto eff = efficiency_curve(design, grid, local);
  const double lowest = *std::min_element(eff.begin(), eff.end());
  EquivalenceCertificate failed;
  failed.bound = model.m;
  failed.tolerance = options.certificate_tolerance;
  failed.max_directional_derivative = kPlusInfinity;
  if (!(lowest > 0.0)) return failed;

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < betas.size(); ++j) {
    if (eff[j] <= lowest * (1.0 + options.active_tolerance)) active.push_back(j);
  }
  std::vector<double> active_betas;
  std::vector<double> mu;
  for (std::size_t j : active) {
    active_betas.push_back(betas[j]);
    mu.push_back(start.size() == betas.size() ? start[j] : 0.0);
  }
  double total = 0.0;
  for (double v : mu) total += v;
  if (!(total > 0.0)) {
    std::fill(mu.begin(), mu.end(), 1.0);
    total = static_cast<double>(mu.size());
  }
  for (double& v : mu) v /= total;

  const AveragedDerivative terms(design, model, active_betas, mu);
  std::vector<double> xs = audit_grid(model.design_interval);
  xs.insert(xs.end(), design.points().begin(), design.points().end());
  const std::size_t na = active.size();
  const std::size_t nx = xs.size();
  std::vector<double> table(na * nx);
  parallel_for(nx, [&](std::size_t i) {
    for (std::size_t a = 0; a < na; ++a) table[a * nx + i] = terms.node_term(a, xs[i]);
  });

  // Exponentiated-gradient descent on mu -> max_x sum_a mu_a t_a(x).
  const auto sup_over_grid = [&](const std::vector<double>& weights, std::size_t& where) {
    double best = kMinusInfinity;
    for (std::size_t i = 0; i < nx; ++i) {
      double d = 0.0;
      for (std::size_t a = 0; a < na; ++a) d += weights[a] * table[a * nx + i];
      if (d > best) {
        best = d;
        where = i;
      }
    }
    return best;
  };
  std::vector<double> best_mu = mu;
  std::size_t where = 0;
  double best_value = sup_over_grid(mu, where);
  if (na > 1) {
    std::vector<double> current = mu;
    std::size_t at = where;
    for (int t = 1; t <= options.measure_iterations; ++t) {
      const double step = 0.5 / std::sqrt(static_cast<double>(t));
      double sum = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        current[a] *= std::exp(-step * table[a * nx + at] / model.m);
        sum += current[a];
      }
      for (double& v : current) v /= sum;
      const double value = sup_over_grid(current, at);
      if (value < best_value) {
        best_value = value;
        best_mu = current;
      }
    }
  }

  const AveragedDerivative derivative(design, model, active_betas, best_mu);
  EquivalenceCertificate cert =
      audit_certificate(derivative, design, options.certificate_tolerance);
  for (std::size_t a = 0; a < na; ++a) {
    if (best_mu[a] > 0.0) cert.least_favorable_weights.emplace_back(active_betas[a], best_mu[a]);
  }
  return cert;
}

DesignSolution solve_maximin(const LocalDesigns& local, const BetaGrid& grid,
                             const GridSpec& xgrid, const MaximinSolveOptions& options) {
  const ModelSpec& model = local.model();
  const auto& betas = grid.values();
  local.prefetch(betas);
  CriterionNodes nodes;
  nodes.betas = betas;
  nodes.weights.assign(betas.size(), 1.0 / static_cast<double>(betas.size()));
  for (double b : betas) nodes.offsets.push_back(local.log_det(b));

  ExchangeOptions exchange = options.exchange;
  exchange.aggregation = Aggregation::kSoftMin;
  const ExchangeResult raw = optimize_design(model, nodes, xgrid, exchange);

  DesignSolution solution = solution_from(raw, model.design_interval);
  if (!(maximin_criterion(solution.design, grid, local).value > 0.0)) {
    throw InfeasibleError(model.name + ": grid too coarse for a nonsingular maximin design");
  }
  if (options.certify) {
    select_certified_design(solution, model.design_interval, [&](const DesignMeasure& d) {
      return maximin_certificate(d, grid, local, options, raw.node_weights);
    });
  }
  solution.criterion_value = maximin_criterion(solution.design, grid, local).value;
  return solution;
}

DesignSolution solve_maximin(const ModelSpec& model, const BetaGrid& grid, const GridSpec& xgrid,
                             const MaximinSolveOptions& options) {
  const LocalDesigns local(model, xgrid);
  return solve_maximin(local, grid, xgrid, options);
}

int support_count(const DesignMeasure& design, const Interval& design_interval) {
  return static_cast<int>(canonical_merge(design, design_interval).size());
}

}  // namespace optdesign
