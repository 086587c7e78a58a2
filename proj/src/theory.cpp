#include "optdesign/theory.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "optdesign/bayes.hpp"
#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/maximin.hpp"
#include "optdesign/models.hpp"
#include "optdesign/parallel.hpp"

namespace optdesign {

namespace {

const LocalDesigns& ensure_local(const ModelSpec& model, const LocalDesigns* local,
                                 std::unique_ptr<LocalDesigns>& owned) {
  if (local) return *local;
  owned = std::make_unique<LocalDesigns>(model);
  return *owned;
}

bool in_fixed_support(const ModelSpec& model, double x) {
  for (double s : model.fixed_support) {
    if (std::abs(s - x) <= 1e-9 * model.design_interval.length()) return true;
  }
  return false;
}

std::string range_text(double lo, double hi) {
  std::ostringstream os;
  os.precision(10);
  os << '[' << lo << ", " << hi << ']';
  return os.str();
}

// Support points of a local design that are not shared by all local designs.
std::vector<double> free_points(const ModelSpec& model, const DesignMeasure& design) {
  std::vector<double> out;
  for (double x : design.points()) {
    if (!in_fixed_support(model, x)) out.push_back(x);
  }
  return out;
}

}  // namespace

DecayEnvelope DecayEnvelope::power(double c1, double gamma) {
  if (!(c1 > 0.0 && gamma > 0.0)) throw UsageError("envelope needs c1 > 0 and gamma > 0");
  return {Form::kPower, c1, gamma};
}

DecayEnvelope DecayEnvelope::exponential(double c1, double gamma) {
  if (!(c1 > 0.0 && gamma > 0.0)) throw UsageError("envelope needs c1 > 0 and gamma > 0");
  return {Form::kExponential, c1, gamma};
}

double DecayEnvelope::operator()(double z) const {
  const double a = std::abs(z);
  if (form == Form::kExponential) return c1 * std::exp(-gamma * a);
  return a == 0.0 ? kPlusInfinity : c1 * std::pow(a, -gamma);
}

bool DecayEnvelope::admissible_for_maximin(const ModelSpec& model) const {
  return form == Form::kExponential || gamma > model.m - model.m_eta;
}

std::string DecayEnvelope::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (form == Form::kExponential) {
    os << c1 << " exp(-" << gamma << " |z|)";
  } else {
    os << c1 << " |z|^-" << gamma;
  }
  return os.str();
}

std::optional<double> TheoryReport::quantity(const std::string& name) const {
  for (const auto& [key, value] : quantities) {
    if (key == name) return value;
  }
  return std::nullopt;
}

TheoryReport check_uniform_decrease(const ModelSpec& model, const ScaleFunction& scale,
                                    const DecayEnvelope& envelope,
                                    const std::vector<double>& beta_samples, double min_distance,
                                    const LocalDesigns* local) {
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns& designs = ensure_local(model, local, owned);
  designs.prefetch(beta_samples);
  const LocalOracle oracle = designs.oracle();
  const std::size_t n = beta_samples.size();

  std::vector<long long> violations(n, 0);
  std::vector<long long> checked(n, 0);
  std::vector<double> worst(n, kMinusInfinity);
  std::vector<double> nearest_low(n, kPlusInfinity);
  parallel_for(n, [&](std::size_t i) {
    const double b = beta_samples[i];
    for (double bt : beta_samples) {
      const double q = q_efficiency(model, b, bt, oracle).value;
      const double z = scale(b) - scale(bt);
      if (q < 0.5) nearest_low[i] = std::min(nearest_low[i], std::abs(z));
      if (std::abs(z) < min_distance) continue;
      ++checked[i];
      const double bound = envelope(z);
      const double margin = q - bound;
      worst[i] = std::max(worst[i], margin);
      if (q > bound * (1.0 + 1e-12)) ++violations[i];
    }
  });

  TheoryReport report;
  report.check = "uniform-decrease";
  report.domain = model.name + ", l = " + scale.name() + ", beta in " +
                  range_text(beta_samples.front(), beta_samples.back()) +
                  ", envelope " + envelope.describe();
  double lambda = kPlusInfinity;
  report.worst_margin = kMinusInfinity;
  for (std::size_t i = 0; i < n; ++i) {
    report.samples += checked[i];
    report.violations += violations[i];
    report.worst_margin = std::max(report.worst_margin, worst[i]);
    lambda = std::min(lambda, nearest_low[i]);
  }
  if (std::isfinite(lambda)) report.lambda_estimate = lambda;
  report.quantities.emplace_back("min_distance", min_distance);
  report.passed = report.violations == 0;
  return report;
}

TheoryReport check_gram_domination(const ModelSpec& model, const std::vector<double>& x_samples,
                                 const BetaGrid& beta_grid, const LocalDesigns* local) {
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns& designs = ensure_local(model, local, owned);
  const auto& betas = beta_grid.values();
  designs.prefetch(betas);
  const int m = model.m;

  // Parameter whose local design carries x.
  std::vector<double> free_of_grid;
  std::vector<double> beta_of_free;
  if (!model.support_inverse) {
    for (double b : betas) {
      for (double x : free_points(model, designs.design(b))) {
        free_of_grid.push_back(x);
        beta_of_free.push_back(b);
      }
    }
  }
  const auto dominating_beta = [&](double x) {
    if (model.support_inverse) {
      return std::clamp(model.support_inverse(x), beta_grid.beta_min(), beta_grid.beta_max());
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < free_of_grid.size(); ++i) {
      if (std::abs(free_of_grid[i] - x) < std::abs(free_of_grid[best] - x)) best = i;
    }
    return beta_of_free[best];
  };
  std::vector<double> tilde(x_samples.size());
  for (std::size_t i = 0; i < x_samples.size(); ++i) {
    if (!in_fixed_support(model, x_samples[i])) tilde[i] = dominating_beta(x_samples[i]);
  }
  std::vector<double> tilde_betas;
  for (std::size_t i = 0; i < x_samples.size(); ++i) {
    if (!in_fixed_support(model, x_samples[i])) tilde_betas.push_back(tilde[i]);
  }
  designs.prefetch(tilde_betas);

  // Sorted index tuples of size m.
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> current(m);
  const std::size_t ns = x_samples.size();
  const auto recurse = [&](auto&& self, int depth, std::size_t start) -> void {
    if (depth == m) {
      tuples.push_back(current);
      return;
    }
    for (std::size_t i = start; i < ns; ++i) {
      current[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);

  std::vector<double> c0_gram(betas.size(), 0.0);
  std::vector<double> c0_local(betas.size(), 0.0);
  std::vector<long long> violations(betas.size(), 0);
  parallel_for(betas.size(), [&](std::size_t j) {
    const double b = betas[j];
    std::vector<double> local_det(ns, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
      if (in_fixed_support(model, x_samples[i])) continue;
      local_det[i] = information_matrix(designs.design(tilde[i]), model, b).determinant();
    }
    std::vector<double> pts(m);
    std::vector<double> anchor;
    for (const auto& t : tuples) {
      for (int r = 0; r < m; ++r) pts[r] = x_samples[t[r]];
      const double lhs = gram_determinant(pts, model, b);
      double gram_sum = 0.0;
      double local_sum = 0.0;
      for (int r = 0; r < m; ++r) {
        if (in_fixed_support(model, pts[r])) continue;
        anchor.assign(model.fixed_support.begin(), model.fixed_support.end());
        anchor.push_back(pts[r]);
        if (static_cast<int>(anchor.size()) == m) gram_sum += gram_determinant(anchor, model, b);
        local_sum += local_det[t[r]];
      }
      if (lhs <= 0.0) continue;
      const double g = gram_sum > 0.0 ? lhs / gram_sum : kPlusInfinity;
      const double c = local_sum > 0.0 ? lhs / local_sum : kPlusInfinity;
      c0_gram[j] = std::max(c0_gram[j], g);
      c0_local[j] = std::max(c0_local[j], c);
      if (g > 1.0 + 1e-9 || !std::isfinite(c)) ++violations[j];
    }
  });

  TheoryReport report;
  report.check = "gram-domination";
  report.domain = model.name + ", beta in " + range_text(beta_grid.beta_min(), beta_grid.beta_max());
  report.samples = static_cast<long long>(tuples.size() * betas.size());
  double cg = 0.0;
  double cl = 0.0;
  for (std::size_t j = 0; j < betas.size(); ++j) {
    cg = std::max(cg, c0_gram[j]);
    cl = std::max(cl, c0_local[j]);
    report.violations += violations[j];
  }
  report.worst_margin = cg - 1.0;
  report.quantities.emplace_back("c0_gram", cg);
  report.quantities.emplace_back("c0", cl);
  report.quantities.emplace_back("tuples", static_cast<double>(tuples.size()));
  report.passed = report.violations == 0;
  return report;
}

TheoryReport check_prior_domination(const ParameterPrior& prior, const ScaleFunction& scale,
                                    const std::vector<double>& beta_samples) {
  TheoryReport report;
  report.check = "prior-domination";
  report.domain = prior.describe() + ", l = " + scale.name();
  const double total = scale(prior.hi()) - scale(prior.lo());
  double c3 = kPlusInfinity;
  double c3_max = 0.0;
  for (std::size_t i = 0; i < beta_samples.size(); ++i) {
    for (std::size_t k = i + 1; k < beta_samples.size(); ++k) {
      const double a = beta_samples[i];
      const double b = beta_samples[k];
      const double len = scale(b) - scale(a);
      if (!(len > 0.0)) continue;
      ++report.samples;
      const double ratio = prior.mass(a, b) / (len / total);
      c3 = std::min(c3, ratio);
      c3_max = std::max(c3_max, ratio);
      if (!(ratio > 0.0)) ++report.violations;
    }
  }
  report.worst_margin = std::isfinite(c3) ? -c3 : 0.0;
  report.quantities.emplace_back("c3", c3);
  report.quantities.emplace_back("c3_max", c3_max);
  report.passed = report.violations == 0 && report.samples > 0;
  return report;
}

LowerBoundDesign construct_lower_bound_design(const ModelSpec& model, const ScaleFunction& scale,
                                              double beta_min, double beta_max, double lambda,
                                              const LocalDesigns* local) {
  if (!(lambda > 0.0)) throw UsageError("lambda must be positive");
  model.require_admissible(beta_min);
  model.require_admissible(beta_max);
  const double lo = scale(beta_min);
  const double width = scale(beta_max) - lo;
  if (width < 4.0 * lambda * (1.0 - 1e-12)) {
    throw UsageError("lower-bound construction needs l(beta_max) - l(beta_min) >= 4 lambda");
  }
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns& designs = ensure_local(model, local, owned);
  const int n = static_cast<int>(std::ceil(width / (2.0 * lambda) * (1.0 - 1e-12)));

  LowerBoundDesign out{DesignMeasure::point_mass(0.0), n, width, {}};
  std::vector<DesignMeasure> parts;
  for (int k = 1; k <= n; ++k) {
    const double b = scale.inverse(lo + (2.0 * k - 1.0) * width / (2.0 * n));
    out.betas.push_back(b);
    parts.push_back(designs.design(b));
  }
  const std::vector<double> coeffs(n, 1.0 / n);
  out.design = canonical_merge(DesignMeasure::mixture(parts, coeffs),
                               1e-9 * model.design_interval.length(), 0.0);
  return out;
}

TheoryReport verify_lower_bounds(const ModelSpec& model, const ScaleFunction& scale,
                                 double beta_min, double beta_max, double lambda,
                                 std::optional<ParameterPrior> prior, int grid_count,
                                 const LocalDesigns* local) {
  if (grid_count < 2) throw UsageError("lower-bound audit needs at least two grid values");
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns& designs = ensure_local(model, local, owned);
  const LowerBoundDesign lb =
      construct_lower_bound_design(model, scale, beta_min, beta_max, lambda, &designs);

  std::vector<double> values;
  const double lo = scale(beta_min);
  for (int i = 0; i < grid_count; ++i) {
    values.push_back(scale.inverse(lo + lb.width * i / (grid_count - 1)));
  }
  values.insert(values.end(), lb.betas.begin(), lb.betas.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const BetaGrid grid = BetaGrid::from_values(values);
  const auto eff = efficiency_curve(lb.design, grid, designs);

  const double pointwise_bound = 0.5 / std::pow(lb.n, model.m - model.m_eta);
  const double phi_bound = lambda / (2.0 * lb.width);
  const double phi = *std::min_element(eff.begin(), eff.end());

  TheoryReport report;
  report.check = "lower-bounds";
  report.domain = model.name + ", l = " + scale.name() + ", beta in " +
                  range_text(beta_min, beta_max);
  report.samples = static_cast<long long>(eff.size());
  report.worst_margin = kMinusInfinity;
  for (double e : eff) {
    report.worst_margin = std::max(report.worst_margin, pointwise_bound - e);
    if (e < pointwise_bound) ++report.violations;
  }
  if (model.m == 1) {
    report.worst_margin = std::max(report.worst_margin, phi_bound - phi);
    if (phi < phi_bound) ++report.violations;
  }

  const ParameterPrior p = prior ? *prior : ParameterPrior::uniform(beta_min, beta_max);
  const double psi = bayes_criterion(lb.design, model, p, true, &designs);
  const double psi_bound = -std::log(lb.width) + std::log(lambda);
  ++report.samples;
  report.worst_margin = std::max(report.worst_margin, psi_bound - psi);
  if (psi < psi_bound) ++report.violations;

  report.quantities = {{"B", lb.width},
                       {"lambda", lambda},
                       {"n", static_cast<double>(lb.n)},
                       {"support_points", static_cast<double>(lb.design.size())},
                       {"phi", phi},
                       {"phi_bound", phi_bound},
                       {"pointwise_bound", pointwise_bound},
                       {"psi_st", psi},
                       {"psi_bound", psi_bound},
                       {"psi_floor", -std::log(2.0 * lb.n)}};
  report.passed = report.violations == 0;
  return report;
}

std::vector<GrowthRow> growth_study(const ModelSpec& model, GrowthCriterion criterion,
                                    const std::vector<double>& B_list,
                                    const GrowthOptions& options) {
  if (!std::is_sorted(B_list.begin(), B_list.end())) {
    throw UsageError("growth study needs B values in ascending order");
  }
  const LocalDesigns local(model);
  std::vector<GrowthRow> rows;
  for (double B : B_list) {
    GrowthRow row;
    row.B = B;
    try {
      DesignSolution s = [&] {
        if (criterion == GrowthCriterion::kMaximin) {
          return solve_maximin(local, BetaGrid(1.0, B, options.beta_grid_count));
        }
        return solve_bayes(model, ParameterPrior::uniform(1.0, B, options.quadrature_nodes));
      }();
      row.support_count = support_count(s.design, model.design_interval);
      row.criterion_value = s.criterion_value;
      row.certificate_passed = s.certificate.passed;
      row.design = canonical_merge(s.design, model.design_interval);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double best_one_point_bayes(const ModelSpec& model, const ParameterPrior& prior,
                            const LocalDesigns* local) {
  std::unique_ptr<LocalDesigns> owned;
  const LocalDesigns& designs = ensure_local(model, local, owned);
  const auto xs = audit_grid(model.design_interval, 2001);
  std::vector<double> values(xs.size());
  const auto nodes = prior.quadrature();
  std::vector<double> betas;
  for (const auto& q : nodes) betas.push_back(q.beta);
  designs.prefetch(betas);
  parallel_for(xs.size(), [&](std::size_t i) {
    values[i] = bayes_criterion(DesignMeasure::point_mass(xs[i]), model, prior, true, &designs);
  });
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  const std::function<double(double)> fn = [&](double x) {
    return bayes_criterion(DesignMeasure::point_mass(x), model, prior, true, &designs);
  };
  const double lo = xs[best > 0 ? best - 1 : best];
  const double hi = xs[best + 1 < xs.size() ? best + 1 : best];
  return std::max(values[best], golden_maximum(fn, lo, hi).second);
}

}  // namespace optdesign
