#include "optdesign/local.hpp"

#include <cmath>
#include <string>

#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/parallel.hpp"

namespace optdesign {

namespace {

constexpr double kSolverMergeFraction = 1e-5;
constexpr double kSolverWeightFloor = 1e-9;
constexpr double kAnalyticAgreement = 1e-8;

}  // namespace

DesignMeasure merge_solver_output(const DesignMeasure& raw, const Interval& design_interval) {
  return canonical_merge(raw, kSolverMergeFraction * design_interval.length(), kSolverWeightFloor);
}

DesignSolution solution_from(const ExchangeResult& raw, const Interval& design_interval) {
  return DesignSolution{merge_solver_output(raw.design, design_interval),
                        EquivalenceCertificate{},
                        0.0,
                        raw.design,
                        raw.trace,
                        raw.iterations,
                        raw.converged};
}

void select_certified_design(
    DesignSolution& solution, const Interval& design_interval,
    const std::function<EquivalenceCertificate(const DesignMeasure&)>& certify) {
  try {
    DesignMeasure coarse = canonical_merge(solution.design, design_interval);
    if (coarse.size() < solution.design.size()) {
      EquivalenceCertificate cert = certify(coarse);
      if (cert.passed) {
        solution.design = std::move(coarse);
        solution.certificate = std::move(cert);
        return;
      }
    }
  } catch (const SingularityError&) {
  } catch (const DegenerateDesignError&) {
  }
  solution.certificate = certify(solution.design);
}

DesignSolution solve_local(const ModelSpec& model, double beta, const GridSpec& grid,
                           const LocalSolveOptions& options) {
  model.validate();
  model.require_admissible(beta);
  std::optional<DesignMeasure> seed;
  if (options.seed_with_analytic && model.analytic_local) seed = model.analytic_local(beta);

  const ExchangeResult raw =
      optimize_design(model, CriterionNodes::single(beta), grid, options.exchange, seed);

  DesignSolution solution = solution_from(raw, model.design_interval);
  const InfoMatrix info = information_matrix(solution.design, model, beta);
  if (info.is_singular()) {
    throw InfeasibleError(model.name + ": grid too coarse for a nonsingular local design");
  }
  solution.criterion_value = info.determinant();

  if (seed) {
    const double analytic = information_matrix(*seed, model, beta).determinant();
    if (solution.criterion_value > analytic * (1.0 + kAnalyticAgreement)) {
      throw InternalError(model.name + ": closed-form local design at beta = " +
                          std::to_string(beta) + " is beaten by the numeric optimum");
    }
  }
  if (options.certify) {
    select_certified_design(solution, model.design_interval, [&](const DesignMeasure& d) {
      const AveragedDerivative derivative(d, model, {beta}, {1.0});
      return audit_certificate(derivative, d, options.certificate_tolerance);
    });
    solution.criterion_value = information_matrix(solution.design, model, beta).determinant();
  }
  return solution;
}

double directional_derivative(const DesignMeasure& design, const ModelSpec& model, double beta,
                              double x) {
  const auto inv = information_matrix(design, model, beta).inverse();
  if (!inv) throw SingularityError(model.name + ": information matrix is singular");
  if (!model.design_interval.contains(x)) {
    throw DomainError(model.name + ": x outside the design interval");
  }
  const auto f = model.score_at(x, beta);
  return inv->quadratic(std::span<const double>(f.data(), model.m));
}

LocalDesigns::LocalDesigns(ModelSpec model, GridSpec grid)
    : model_(std::move(model)), grid_(grid) {
  model_.validate();
}

LocalDesigns::Entry LocalDesigns::compute(double beta) const {
  model_.require_admissible(beta);
  if (model_.analytic_local) {
    DesignMeasure d = model_.analytic_local(beta);
    const double ld = optdesign::log_det(information_matrix(d, model_, beta));
    if (ld == kMinusInfinity) {
      throw InternalError(model_.name + ": closed-form local design is singular");
    }
    return {std::move(d), ld};
  }
  LocalSolveOptions options;
  options.certify = false;
  DesignSolution s = solve_local(model_, beta, grid_, options);
  return {s.design, std::log(s.criterion_value)};
}

const LocalDesigns::Entry& LocalDesigns::entry(double beta) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(beta); it != cache_.end()) return it->second;
  }
  Entry e = compute(beta);
  std::lock_guard lock(mutex_);
  return cache_.try_emplace(beta, std::move(e)).first->second;
}

DesignMeasure LocalDesigns::design(double beta) const { return entry(beta).design; }

double LocalDesigns::log_det(double beta) const { return entry(beta).log_det; }

void LocalDesigns::prefetch(std::span<const double> betas) const {
  std::vector<double> missing;
  {
    std::lock_guard lock(mutex_);
    for (double b : betas) {
      if (!cache_.contains(b)) missing.push_back(b);
    }
  }
  std::vector<std::optional<Entry>> computed(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) { computed[i] = compute(missing[i]); });
  std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < missing.size(); ++i) {
    cache_.try_emplace(missing[i], std::move(*computed[i]));
  }
}

LocalOracle LocalDesigns::oracle() const {
  return [this](double beta) { return design(beta); };
}

}  // namespace optdesign
